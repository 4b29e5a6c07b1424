#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "treecoh/ring.hpp"

namespace treecoh {

// Raised when an operation would need p-adic digits beyond the precision
// window.  Never silently wraps.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Element of PGL_2 over the local field, represented by an integral
// primitive matrix with entries in the window ring GR(p^W, f), taken modulo
// unit scalars.  Every element of PGL_2(F) has such a representative (scale
// by a power of the uniformizer).
struct GMat {
    std::array<std::array<RElt, 2>, 2> m{};
};

inline GMat g_make(const RElt& a, const RElt& b, const RElt& c, const RElt& d) {
    GMat g;
    g.m[0][0] = a; g.m[0][1] = b; g.m[1][0] = c; g.m[1][1] = d;
    return g;
}

inline GMat g_identity(const GaloisRing& R) {
    return g_make(R.one(), R.zero(), R.zero(), R.one());
}

// Divide out the content p^v so that some entry is a unit.  The division is
// exact on the underlying element of PGL_2; representatives lose v p-adic
// digits, which the window slack absorbs for the short words used here.
inline GMat g_primitive(const GaloisRing& R, GMat A) {
    int v = R.k();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) v = std::min(v, R.val(A.m[i][j]));
    if (v >= R.k() - 1) throw PrecisionError("matrix content exhausts the precision window");
    if (v > 0)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) A.m[i][j] = R.div_p(A.m[i][j], v);
    return A;
}

inline GMat g_mul(const GaloisRing& R, const GMat& A, const GMat& B) {
    GMat C;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            C.m[i][j] = R.add(R.mul(A.m[i][0], B.m[0][j]), R.mul(A.m[i][1], B.m[1][j]));
    return g_primitive(R, C);
}

// The uniformizer-translation diag(1, p): moves s_k to s_{k+1}.
inline GMat g_translation(const GaloisRing& R) {
    return g_make(R.one(), R.zero(), R.zero(), R.from_int(R.p()));
}

// The edge flip (0 1; p 0): swaps s_0 and s_1, normalizes the Iwahori group.
inline GMat g_flip(const GaloisRing& R) {
    return g_make(R.zero(), R.one(), R.from_int(R.p()), R.zero());
}

inline GMat g_diag(const GaloisRing& R, const RElt& u) {
    return g_make(u, R.zero(), R.zero(), R.one());
}
inline GMat g_upper(const GaloisRing& R, const RElt& x) {  // (1 x; 0 1)
    return g_make(R.one(), x, R.zero(), R.one());
}
inline GMat g_lower(const GaloisRing& R, const RElt& x) {  // (1 0; x 1)
    return g_make(R.one(), R.zero(), x, R.one());
}

// A vertex of the Bruhat-Tits tree in Hermite normal form: the homothety
// class of the lattice spanned by the columns of (p^a 0; b p^c), with b
// reduced mod p^c and the class normalized so min(a, c, val(b)) = 0.  This
// triple is unique per vertex; distance to the base vertex s_0 is a + c.
struct TreeVertex {
    int a = 0, c = 0;
    RElt b{};  // coefficients reduced mod p^c
};

// Finite ball of the (q+1)-regular tree around s_0, with the group action.
// Immutable after construction.
class TruncatedTree {
public:
    // ring: the window ring GR(p^W, f); radius: ball radius R >= 1.
    // Requires W >= R + 2 so that actions and neighbor steps near the
    // boundary stay inside the window.
    TruncatedTree(const GaloisRing& ring, int radius) : R_(ring), radius_(radius) {
        if (radius < 1) throw std::domain_error("tree: radius must be >= 1");
        if (R_.k() < radius + 2)
            throw PrecisionError("tree: window must satisfy W >= R + 2");
        build();
    }

    const GaloisRing& ring() const { return R_; }
    int radius() const { return radius_; }
    std::int64_t q() const { return R_.q(); }
    int vertex_count() const { return (int)verts_.size(); }
    const TreeVertex& vertex(int id) const { return verts_[id]; }
    const std::vector<int>& neighbors(int id) const { return adj_[id]; }
    int dist(int id) const { return verts_[id].a + verts_[id].c; }

    bool is_edge(int u, int v) const {
        const auto& a = adj_[u];
        return std::binary_search(a.begin(), a.end(), v);
    }

    // Id of the standard apartment vertex s_k (lattice diag(1, p^k) for
    // k >= 0, diag(p^-k, 1) for k < 0); error if outside the ball.
    int s_index(int k) const {
        TreeVertex v;
        if (k >= 0) v.c = k; else v.a = -k;
        auto it = index_.find(key(v));
        if (it == index_.end()) throw std::out_of_range("tree: s_k outside the ball");
        return it->second;
    }

    // Id of an arbitrary canonical form, or -1 when outside the ball.
    int find(const TreeVertex& v) const {
        auto it = index_.find(key(v));
        return it == index_.end() ? -1 : it->second;
    }

    // Apply a group element to a vertex: HNF-normalize g * C_v.  Returns the
    // image id, or -1 if the image lies outside the ball.  Throws
    // PrecisionError when normalization would leave the window.
    int act(const GMat& g, int id) const {
        const TreeVertex& v = verts_[id];
        GMat M;
        const RElt pa = R_.pow(R_.from_int(R_.p()), v.a);
        const RElt pc = R_.pow(R_.from_int(R_.p()), v.c);
        // columns of g * (p^a 0; b p^c)
        M.m[0][0] = R_.add(R_.mul(g.m[0][0], pa), R_.mul(g.m[0][1], v.b));
        M.m[1][0] = R_.add(R_.mul(g.m[1][0], pa), R_.mul(g.m[1][1], v.b));
        M.m[0][1] = R_.mul(g.m[0][1], pc);
        M.m[1][1] = R_.mul(g.m[1][1], pc);
        return find(hnf(M));
    }

    // Apply g to every vertex of a path; -1 if any image leaves the ball.
    std::vector<int> act_path(const GMat& g, const std::vector<int>& path) const {
        std::vector<int> out(path.size());
        for (size_t i = 0; i < path.size(); ++i) {
            out[i] = act(g, path[i]);
            if (out[i] < 0) return {};
        }
        return out;
    }

    // Hermite normal form of an integral matrix with unit determinant scale:
    // the canonical (a, c, b) of the lattice spanned by its columns.
    TreeVertex hnf(GMat M) const {
        const int W = R_.k();
        // choose the column whose top entry has least valuation
        if (R_.val(M.m[0][1]) < R_.val(M.m[0][0])) {
            std::swap(M.m[0][0], M.m[0][1]);
            std::swap(M.m[1][0], M.m[1][1]);
        }
        const int a0 = R_.val(M.m[0][0]);
        if (a0 >= W - 1) throw PrecisionError("tree: pivot valuation exhausts the window");
        // scale column 1 so its top entry is exactly p^a0
        const RElt u = R_.div_p(M.m[0][0], a0);
        const RElt uinv = R_.inv(u);
        M.m[0][0] = R_.pow(R_.from_int(R_.p()), a0);
        M.m[1][0] = R_.mul(M.m[1][0], uinv);
        // eliminate the top of column 2
        const RElt t = R_.div_p(M.m[0][1], a0);
        M.m[0][1] = R_.zero();
        M.m[1][1] = R_.sub(M.m[1][1], R_.mul(t, M.m[1][0]));
        // column 2 is now (0, *), its entry known mod p^(W - a0); the
        // valuation read off the representative is certified only below that
        const int c0 = R_.val(M.m[1][1]);
        if (c0 >= W - a0) throw PrecisionError("tree: result exceeds the precision window");
        M.m[1][1] = R_.pow(R_.from_int(R_.p()), c0);
        // reduce b mod p^c and strip the projective content p^e
        RElt b = R_.reduce_mod(M.m[1][0], c0);
        const int e = std::min({a0, c0, R_.val(b)});
        TreeVertex v;
        v.a = a0 - e;
        v.c = c0 - e;
        v.b = e ? R_.reduce_mod(R_.div_p(b, e), v.c) : b;
        return v;
    }

    // ----- oriented path enumeration -----
    // All directed injective paths with L edges inside the ball, in
    // lexicographic order of vertex-id sequences.
    std::vector<std::vector<int>> all_paths(int L) const {
        std::vector<std::vector<int>> out;
        for (int v = 0; v < vertex_count(); ++v) {
            std::vector<int> cur{v};
            extend_right(cur, L, out);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Paths with L edges whose vertex at position pos is v.
    std::vector<std::vector<int>> paths_with_vertex_at(int L, int pos, int v) const {
        if (pos < 0 || pos > L) throw std::domain_error("tree: anchor position out of range");
        std::vector<std::vector<int>> out;
        std::vector<int> cur{v};
        grow_around(cur, pos, L, out);
        std::sort(out.begin(), out.end());
        return out;
    }

    // Paths with L edges whose edge at position pos is {u, v}, either
    // orientation.
    std::vector<std::vector<int>> paths_with_edge_at(int L, int pos, int u, int v) const {
        if (pos < 0 || pos >= L) throw std::domain_error("tree: anchor position out of range");
        if (!is_edge(u, v)) throw std::domain_error("tree: anchor is not an edge");
        std::vector<std::vector<int>> out;
        for (auto [x, y] : {std::pair{u, v}, {v, u}}) {
            std::vector<int> cur{x, y};
            grow_around(cur, pos, L, out);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::tuple<int, int, std::int64_t> key(const TreeVertex& v) const {
        return {v.a, v.c, R_.encode(v.b)};
    }

    void build() {
        // BFS from s_0; neighbor lattices of (p^a 0; b p^c) are
        // (col1 + t col2, p col2) for residue lifts t, and (col2, p col1).
        TreeVertex s0;
        verts_.push_back(s0);
        index_[key(s0)] = 0;
        std::vector<int> frontier{0};
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int id : frontier) {
                if (dist(id) >= radius_) continue;
                for (const TreeVertex& w : neighbor_forms(verts_[id])) {
                    auto it = index_.find(key(w));
                    int wid;
                    if (it == index_.end()) {
                        wid = (int)verts_.size();
                        verts_.push_back(w);
                        index_[key(w)] = wid;
                        next.push_back(wid);
                    } else {
                        wid = it->second;
                    }
                    edge_set_.insert({std::min(id, wid), std::max(id, wid)});
                }
            }
            frontier = std::move(next);
        }
        // canonical vertex order: distance, then (a, c, encode(b))
        std::vector<int> order(verts_.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            const auto kx = std::tuple{dist(x), verts_[x].a, verts_[x].c, R_.encode(verts_[x].b)};
            const auto ky = std::tuple{dist(y), verts_[y].a, verts_[y].c, R_.encode(verts_[y].b)};
            return kx < ky;
        });
        std::vector<int> rank(order.size());
        for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = (int)i;
        std::vector<TreeVertex> nv(verts_.size());
        for (size_t i = 0; i < verts_.size(); ++i) nv[rank[i]] = verts_[i];
        verts_ = std::move(nv);
        index_.clear();
        for (size_t i = 0; i < verts_.size(); ++i) index_[key(verts_[i])] = (int)i;
        adj_.assign(verts_.size(), {});
        for (auto [x, y] : edge_set_) {
            adj_[rank[x]].push_back(rank[y]);
            adj_[rank[y]].push_back(rank[x]);
        }
        edge_set_.clear();
        for (auto& a : adj_) std::sort(a.begin(), a.end());
    }

    std::vector<TreeVertex> neighbor_forms(const TreeVertex& v) const {
        const RElt pa = R_.pow(R_.from_int(R_.p()), v.a);
        const RElt pc = R_.pow(R_.from_int(R_.p()), v.c);
        const RElt pp = R_.from_int(R_.p());
        std::vector<TreeVertex> out;
        GaloisRing k1 = R_.residue_field();
        for (std::int64_t tv = 0; tv < R_.q(); ++tv) {
            const RElt t = k1.decode(tv);  // coefficients < p: a residue lift
            GMat M;
            M.m[0][0] = pa;                                  // col1 = col1 + t col2
            M.m[1][0] = R_.add(v.b, R_.mul(t, pc));
            M.m[0][1] = R_.zero();                           // col2 = p col2
            M.m[1][1] = R_.mul(pp, pc);
            out.push_back(hnf(M));
        }
        GMat M;  // (col2, p col1)
        M.m[0][0] = R_.zero();
        M.m[1][0] = pc;
        M.m[0][1] = R_.mul(pp, pa);
        M.m[1][1] = R_.mul(pp, v.b);
        out.push_back(hnf(M));
        return out;
    }

    void extend_right(std::vector<int>& cur, int L, std::vector<std::vector<int>>& out) const {
        if ((int)cur.size() == L + 1) {
            out.push_back(cur);
            return;
        }
        for (int w : adj_[cur.back()]) {
            if (std::find(cur.begin(), cur.end(), w) != cur.end()) continue;
            cur.push_back(w);
            extend_right(cur, L, out);
            cur.pop_back();
        }
    }

    // cur covers path positions [lo, lo + cur.size()); extend right until it
    // reaches position L, then extend left until it reaches position 0.
    void grow_around(std::vector<int>& cur, int lo, int L,
                     std::vector<std::vector<int>>& out) const {
        const int hi = lo + (int)cur.size() - 1;
        if (hi < L) {
            for (int w : adj_[cur.back()]) {
                if (std::find(cur.begin(), cur.end(), w) != cur.end()) continue;
                cur.push_back(w);
                grow_around(cur, lo, L, out);
                cur.pop_back();
            }
            return;
        }
        if (lo > 0) {
            for (int w : adj_[cur.front()]) {
                if (std::find(cur.begin(), cur.end(), w) != cur.end()) continue;
                cur.insert(cur.begin(), w);
                grow_around(cur, lo - 1, L, out);
                cur.erase(cur.begin());
            }
            return;
        }
        out.push_back(cur);
    }

    GaloisRing R_;
    int radius_;
    std::vector<TreeVertex> verts_;
    std::map<std::tuple<int, int, std::int64_t>, int> index_;
    std::vector<std::vector<int>> adj_;
    std::set<std::pair<int, int>> edge_set_;
};

// ----- standard subgroup generator sets -----
// All factories return integral primitive window-ring matrices; reducing the
// entries mod p^level gives generators of the subgroup's image at that level.

namespace detail {
inline std::vector<RElt> additive_basis(const GaloisRing& R) {
    // Powers of the Teichmueller lift of a residue generator form a
    // coefficient-ring basis of the ring as a module.
    std::vector<RElt> basis;
    RElt xi = R.teichmuller(R.residue_field().generator());
    RElt x = R.one();
    for (int i = 0; i < R.f(); ++i) {
        basis.push_back(x);
        x = R.mul(x, xi);
    }
    return basis;
}
inline RElt p_power(const GaloisRing& R, int e) {
    return R.pow(R.from_int(R.p()), e);
}
}  // namespace detail

// Maximal compact K = PGL_2(o): torus units + both elementary families.
inline std::vector<GMat> gens_K(const GaloisRing& R) {
    std::vector<GMat> g;
    for (const RElt& u : R.unit_group_generators()) g.push_back(g_diag(R, u));
    for (const RElt& e : detail::additive_basis(R)) {
        g.push_back(g_upper(R, e));
        g.push_back(g_lower(R, e));
    }
    return g;
}

// Congruence filtration K_n = 1 + p^n M_2(o), n >= 1.
inline std::vector<GMat> gens_Kn(const GaloisRing& R, int n) {
    if (n < 1) throw std::domain_error("tree: K_n needs n >= 1");
    std::vector<GMat> g;
    const RElt pn = detail::p_power(R, n);
    for (const RElt& e : detail::additive_basis(R)) {
        const RElt x = R.mul(pn, e);
        g.push_back(g_diag(R, R.add(R.one(), x)));                       // 1 + p^n e at (0,0)
        g.push_back(g_make(R.one(), R.zero(), R.zero(), R.add(R.one(), x)));  // at (1,1)
        g.push_back(g_upper(R, x));
        g.push_back(g_lower(R, x));
    }
    return g;
}

// Iwahori subgroup I (lower-left entry in p) and its filtration I_n:
// I_{2m-1} = (1+p^m, p^(m-1); p^m, 1+p^m), I_{2m} = (1+p^m, p^m; p^(m+1), 1+p^m).
inline std::vector<GMat> gens_I(const GaloisRing& R) {
    std::vector<GMat> g;
    for (const RElt& u : R.unit_group_generators()) g.push_back(g_diag(R, u));
    for (const RElt& e : detail::additive_basis(R)) {
        g.push_back(g_upper(R, e));
        g.push_back(g_lower(R, R.mul_int(R.p(), e)));
    }
    return g;
}

inline std::vector<GMat> gens_In(const GaloisRing& R, int n) {
    if (n < 1) throw std::domain_error("tree: I_n needs n >= 1");
    const int m = (n + 1) / 2;
    const int upper = (n % 2) ? m - 1 : m;
    const int lower = (n % 2) ? m : m + 1;
    std::vector<GMat> g;
    const RElt pm = detail::p_power(R, m);
    for (const RElt& e : detail::additive_basis(R)) {
        const RElt xm = R.mul(pm, e);
        g.push_back(g_diag(R, R.add(R.one(), xm)));
        g.push_back(g_make(R.one(), R.zero(), R.zero(), R.add(R.one(), xm)));
        g.push_back(g_upper(R, R.mul(detail::p_power(R, upper), e)));
        g.push_back(g_lower(R, R.mul(detail::p_power(R, lower), e)));
    }
    return g;
}

// Normalizer of the Iwahori subgroup: I together with the flip.
inline std::vector<GMat> gens_Itilde(const GaloisRing& R) {
    std::vector<GMat> g = gens_I(R);
    g.push_back(g_flip(R));
    return g;
}

// Maximal compact torus T^0 = diagonal units mod scalars.
inline std::vector<GMat> gens_T0(const GaloisRing& R) {
    std::vector<GMat> g;
    for (const RElt& u : R.unit_group_generators()) g.push_back(g_diag(R, u));
    return g;
}

// Gamma_0(x, y): units on the diagonal, lower-left in p^x, upper-right in
// p^y.  Negative y means denominators; the generator is then scaled to an
// integral primitive representative.  Gamma_0(l, -k) is the pointwise
// stabilizer of the apartment segment [s_k, s_l].
inline std::vector<GMat> gens_Gamma0(const GaloisRing& R, int x, int y) {
    if (x < 0) throw std::domain_error("tree: Gamma_0 needs lower exponent >= 0");
    std::vector<GMat> g;
    for (const RElt& u : R.unit_group_generators()) g.push_back(g_diag(R, u));
    for (const RElt& e : detail::additive_basis(R)) {
        if (y >= 0) {
            g.push_back(g_upper(R, R.mul(detail::p_power(R, y), e)));
        } else {
            const RElt pj = detail::p_power(R, -y);
            g.push_back(g_make(pj, e, R.zero(), pj));  // p^-y-scaled (1, p^y e; 0, 1)
        }
        g.push_back(g_lower(R, R.mul(detail::p_power(R, x), e)));
    }
    return g;
}

// The congruence heart of the principal-series construction at conductor n:
// J = Gamma_0(p^n) = (o^x, o; p^n, o^x).
inline std::vector<GMat> gens_J(const GaloisRing& R, int n) { return gens_Gamma0(R, n, 0); }

// The two-step filtration pair around level n used for the stratum
// containment argument: h1(n, j) = (1+p^n, p^j; p^(n+1), 1+p^n) and
// h2(n, j) = (1+p^(n+1), p^j; p^(n+1), 1+p^(n+1)), 0 <= j <= n.
inline std::vector<GMat> gens_h1(const GaloisRing& R, int n, int j) {
    if (n < 1 || j < 0 || j > n) throw std::domain_error("tree: h1 needs n >= 1, 0 <= j <= n");
    std::vector<GMat> g;
    const RElt pn = detail::p_power(R, n);
    for (const RElt& e : detail::additive_basis(R)) {
        const RElt xn = R.mul(pn, e);
        g.push_back(g_diag(R, R.add(R.one(), xn)));
        g.push_back(g_make(R.one(), R.zero(), R.zero(), R.add(R.one(), xn)));
        g.push_back(g_upper(R, R.mul(detail::p_power(R, j), e)));
        g.push_back(g_lower(R, R.mul(detail::p_power(R, n + 1), e)));
    }
    return g;
}

inline std::vector<GMat> gens_h2(const GaloisRing& R, int n, int j) {
    if (n < 1 || j < 0 || j > n) throw std::domain_error("tree: h2 needs n >= 1, 0 <= j <= n");
    std::vector<GMat> g;
    const RElt pn1 = detail::p_power(R, n + 1);
    for (const RElt& e : detail::additive_basis(R)) {
        const RElt x = R.mul(pn1, e);
        g.push_back(g_diag(R, R.add(R.one(), x)));
        g.push_back(g_make(R.one(), R.zero(), R.zero(), R.add(R.one(), x)));
        g.push_back(g_upper(R, R.mul(detail::p_power(R, j), e)));
        g.push_back(g_lower(R, x));
    }
    return g;
}

}  // namespace treecoh
