#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treecoh/ring.hpp"
#include "treecoh/tree.hpp"

namespace treecoh {

using cx = std::complex<double>;

// ----- generic finite group by closure -----
template <class E>
struct GroupOps {
    std::function<E(const E&, const E&)> mul;
    std::function<E(const E&)> inv;
    E id;
};

template <class E>
class FiniteGroup {
  public:
    FiniteGroup(GroupOps<E> ops, const std::vector<E>& gens, std::size_t max_order = 1'000'000)
        : ops_(std::move(ops)) {
        std::map<E, int> seen;
        std::vector<E> queue{ops_.id};
        seen.emplace(ops_.id, 0);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (const E& g : gens) {
                E x = ops_.mul(queue[head], g);
                if (seen.emplace(x, 0).second) {
                    if (queue.size() >= max_order)
                        throw std::runtime_error("group: closure exceeds the element cap");
                    queue.push_back(std::move(x));
                }
            }
        }
        elts_.reserve(queue.size());
        for (auto& [e, unused] : seen) elts_.push_back(e);
        for (int i = 0; i < (int)elts_.size(); ++i) index_[elts_[i]] = i;
        for (const E& g : gens) gen_idx_.push_back(index_.at(g));
        std::sort(gen_idx_.begin(), gen_idx_.end());
        gen_idx_.erase(std::unique(gen_idx_.begin(), gen_idx_.end()), gen_idx_.end());
    }

    int order() const { return (int)elts_.size(); }
    const std::vector<E>& elements() const { return elts_; }
    const E& at(int i) const { return elts_.at(i); }
    int index(const E& e) const {
        auto it = index_.find(e);
        return it == index_.end() ? -1 : it->second;
    }
    bool contains(const E& e) const { return index_.count(e) > 0; }
    int id_index() const { return index_.at(ops_.id); }
    int mul(int a, int b) const { return index_.at(ops_.mul(elts_[a], elts_[b])); }
    int inv(int a) const { return index_.at(ops_.inv(elts_[a])); }
    const GroupOps<E>& ops() const { return ops_; }
    const std::vector<int>& generator_indices() const { return gen_idx_; }

    // conjugacy classes: orbits of x -> g x g^-1 over the generators
    int class_count() const {
        ensure_classes();
        return (int)class_reps_.size();
    }
    int class_of(int i) const {
        ensure_classes();
        return class_of_[i];
    }
    int class_rep(int c) const {
        ensure_classes();
        return class_reps_.at(c);
    }
    std::int64_t class_size(int c) const {
        ensure_classes();
        return class_sizes_.at(c);
    }

    int element_order(int i) const {
        int x = i, n = 1;
        const int e = id_index();
        while (x != e) {
            x = mul(x, i);
            if (++n > order()) throw std::logic_error("group: order loop escaped the group");
        }
        return n;
    }

  private:
    void ensure_classes() const {
        if (!class_reps_.empty() || elts_.empty()) return;
        const int n = (int)elts_.size();
        class_of_.assign(n, -1);
        std::vector<int> ginv(gen_idx_.size());
        for (size_t k = 0; k < gen_idx_.size(); ++k) ginv[k] = inv(gen_idx_[k]);
        for (int i = 0; i < n; ++i) {
            if (class_of_[i] >= 0) continue;
            const int c = (int)class_reps_.size();
            class_reps_.push_back(i);
            class_of_[i] = c;
            std::vector<int> stack{i};
            std::int64_t size = 1;
            while (!stack.empty()) {
                const int x = stack.back();
                stack.pop_back();
                for (size_t k = 0; k < gen_idx_.size(); ++k) {
                    const int y = mul(mul(gen_idx_[k], x), ginv[k]);
                    if (class_of_[y] < 0) {
                        class_of_[y] = c;
                        ++size;
                        stack.push_back(y);
                    }
                }
            }
            class_sizes_.push_back(size);
        }
    }

    GroupOps<E> ops_;
    std::vector<E> elts_;
    std::map<E, int> index_;
    std::vector<int> gen_idx_;
    mutable std::vector<int> class_of_, class_reps_;
    mutable std::vector<std::int64_t> class_sizes_;
};

// ----- class functions -----
struct ClassFunction {
    std::vector<cx> v;  // one value per conjugacy class
};

template <class E>
ClassFunction class_function_from(const FiniteGroup<E>& G, const std::function<cx(const E&)>& f) {
    ClassFunction out;
    out.v.reserve(G.class_count());
    for (int c = 0; c < G.class_count(); ++c) out.v.push_back(f(G.at(G.class_rep(c))));
    return out;
}

template <class E>
ClassFunction trivial_character(const FiniteGroup<E>& G) {
    return {std::vector<cx>(G.class_count(), 1.0)};
}

template <class E>
cx value_at(const FiniteGroup<E>& G, const ClassFunction& f, const E& g) {
    const int i = G.index(g);
    if (i < 0) throw std::domain_error("group: element outside the group");
    return f.v.at(G.class_of(i));
}

template <class E>
cx inner_product(const FiniteGroup<E>& G, const ClassFunction& a, const ClassFunction& b) {
    cx s = 0.0;
    for (int c = 0; c < G.class_count(); ++c)
        s += (double)G.class_size(c) * a.v.at(c) * std::conj(b.v.at(c));
    return s / (double)G.order();
}

// Restriction to a subgroup given as its own closure over the same element
// type; every subgroup element must lie in the parent.
template <class E>
ClassFunction restrict_to(const FiniteGroup<E>& G, const ClassFunction& f,
                          const FiniteGroup<E>& H) {
    ClassFunction out;
    out.v.reserve(H.class_count());
    for (int d = 0; d < H.class_count(); ++d) out.v.push_back(value_at(G, f, H.at(H.class_rep(d))));
    return out;
}

// Frobenius induction via class fusion.
template <class E>
ClassFunction induce_from(const FiniteGroup<E>& G, const FiniteGroup<E>& H,
                          const ClassFunction& f) {
    std::vector<cx> acc(G.class_count(), 0.0);
    for (int d = 0; d < H.class_count(); ++d) {
        const int gi = G.index(H.at(H.class_rep(d)));
        if (gi < 0) throw std::domain_error("group: induction from a non-subgroup");
        acc[G.class_of(gi)] += (double)H.class_size(d) * f.v.at(d);
    }
    ClassFunction out;
    out.v.resize(G.class_count());
    const double scale = (double)G.order() / (double)H.order();
    for (int c = 0; c < G.class_count(); ++c)
        out.v[c] = acc[c] * scale / (double)G.class_size(c);
    return out;
}

inline double require_near_real_integer(cx z, double tol, const std::string& what) {
    const double r = std::round(z.real());
    if (std::abs(z.real() - r) > tol || std::abs(z.imag()) > tol)
        throw std::logic_error("group: " + what + " is not an integer within tolerance");
    return r;
}

inline cx root_of_unity(std::int64_t n, std::int64_t k) {
    const double two_pi = 6.283185307179586476925286766559;
    return std::polar(1.0, two_pi * (double)(((k % n) + n) % n) / (double)n);
}

// ----- projective 2x2 matrices over a finite-level ring -----
// Canonical representative: the first unit entry in reading order is scaled
// to 1, which kills exactly the unit-scalar center.
struct PglMat {
    std::array<std::int64_t, 4> c{};
    auto operator<=>(const PglMat&) const = default;
};

inline PglMat pgl_canon(const GaloisRing& R, std::array<RElt, 4> m) {
    int u = -1;
    for (int i = 0; i < 4 && u < 0; ++i)
        if (R.is_unit(m[i])) u = i;
    if (u < 0) throw std::domain_error("pgl: no unit entry");
    const RElt s = R.inv(m[u]);
    PglMat out;
    for (int i = 0; i < 4; ++i) out.c[i] = R.encode(R.mul(s, m[i]));
    return out;
}

inline std::array<RElt, 4> pgl_decode(const GaloisRing& R, const PglMat& g) {
    return {R.decode(g.c[0]), R.decode(g.c[1]), R.decode(g.c[2]), R.decode(g.c[3])};
}

// Reduce a window-ring matrix coefficientwise into the level ring.  Both
// rings share the same modulus polynomial, so coefficients just drop mod p^L.
inline PglMat pgl_from_window(const GaloisRing& level, const GMat& g) {
    std::array<RElt, 4> m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            RElt r{};
            for (int t = 0; t < level.f(); ++t)
                r[t] = GaloisRing::mod(g.m[i][j][t], level.pk());
            m[i * 2 + j] = r;
        }
    return pgl_canon(level, m);
}

inline GroupOps<PglMat> pgl_ops(const GaloisRing& R) {
    GroupOps<PglMat> ops;
    ops.mul = [R](const PglMat& a, const PglMat& b) {
        const auto x = pgl_decode(R, a), y = pgl_decode(R, b);
        std::array<RElt, 4> m;
        m[0] = R.add(R.mul(x[0], y[0]), R.mul(x[1], y[2]));
        m[1] = R.add(R.mul(x[0], y[1]), R.mul(x[1], y[3]));
        m[2] = R.add(R.mul(x[2], y[0]), R.mul(x[3], y[2]));
        m[3] = R.add(R.mul(x[2], y[1]), R.mul(x[3], y[3]));
        return pgl_canon(R, m);
    };
    ops.inv = [R](const PglMat& a) {
        const auto x = pgl_decode(R, a);
        // adjugate; the determinant is a central unit and drops out
        return pgl_canon(R, {x[3], R.neg(x[1]), R.neg(x[2]), x[0]});
    };
    ops.id = pgl_canon(R, {R.one(), R.zero(), R.zero(), R.one()});
    return ops;
}

template <class Container>
std::vector<PglMat> pgl_reduce_generators(const GaloisRing& level, const Container& gens) {
    std::vector<PglMat> out;
    for (const GMat& g : gens) out.push_back(pgl_from_window(level, g));
    return out;
}

// ----- the Iwahori normalizer at a finite level -----
// Elements are written Pi^eps * M with M = (a, b; p c', d) upper-block
// integral, stored as the quad (a, b, c', d) over the level ring with a
// scaled to 1.  Multiplying through Pi twists by the flip automorphism
// sigma(a, b, c', d) = (d, c', b, a); plain matrices at a finite level would
// lose the c'-digit, so the quad form is the faithful representation.
struct TildeElt {
    int eps = 0;
    std::array<std::int64_t, 4> m{};
    auto operator<=>(const TildeElt&) const = default;
};

inline TildeElt tilde_canon(const GaloisRing& R, int eps, std::array<RElt, 4> q) {
    if (!R.is_unit(q[0])) throw std::domain_error("tilde: quad with non-unit corner");
    const RElt s = R.inv(q[0]);
    TildeElt out;
    out.eps = eps & 1;
    for (int i = 0; i < 4; ++i) out.m[i] = R.encode(R.mul(s, q[i]));
    return out;
}

inline GroupOps<TildeElt> tilde_ops(const GaloisRing& R) {
    auto decode = [](const GaloisRing& S, const TildeElt& t) {
        return std::array<RElt, 4>{S.decode(t.m[0]), S.decode(t.m[1]), S.decode(t.m[2]),
                                   S.decode(t.m[3])};
    };
    GroupOps<TildeElt> ops;
    ops.mul = [R, decode](const TildeElt& x, const TildeElt& y) {
        auto a = decode(R, x);
        if (y.eps) a = {a[3], a[2], a[1], a[0]};  // sigma twist
        const auto b = decode(R, y);
        std::array<RElt, 4> q;
        q[0] = R.add(R.mul(a[0], b[0]), R.mul_int(R.p(), R.mul(a[1], b[2])));
        q[1] = R.add(R.mul(a[0], b[1]), R.mul(a[1], b[3]));
        q[2] = R.add(R.mul(a[2], b[0]), R.mul(a[3], b[2]));
        q[3] = R.add(R.mul_int(R.p(), R.mul(a[2], b[1])), R.mul(a[3], b[3]));
        return tilde_canon(R, x.eps ^ y.eps, q);
    };
    ops.inv = [R, decode](const TildeElt& x) {
        const auto a = decode(R, x);
        // (a, b; pc', d)^-1 = det^-1 (d, -b; -pc', a); the determinant is a
        // unit scalar and drops out under canonical scaling
        std::array<RElt, 4> q{a[3], R.neg(a[1]), R.neg(a[2]), a[0]};
        if (x.eps) q = {q[3], q[2], q[1], q[0]};
        return tilde_canon(R, x.eps, q);
    };
    ops.id = TildeElt{0, {1, 0, 0, 0}};
    // normalize the identity through canon so encodings match
    ops.id = tilde_canon(R, 0, {R.one(), R.zero(), R.zero(), R.one()});
    return ops;
}

// Split a window matrix in the Iwahori normalizer as Pi^eps M and reduce the
// quad of M into the level ring.  Requires one spare precision digit for the
// lower-left division.
inline TildeElt tilde_from_window(const GaloisRing& level, const GaloisRing& window,
                                  const GMat& g) {
    if (window.k() < level.k() + 1)
        throw std::domain_error("tilde: window too small for the level");
    const RElt det = window.sub(window.mul(g.m[0][0], g.m[1][1]), window.mul(g.m[0][1], g.m[1][0]));
    const int eps = window.val(det) % 2;
    GMat M = eps ? g_mul(window, g_flip(window), g) : g;
    if (!window.is_unit(M.m[0][0]) || !window.is_unit(M.m[1][1]) || window.val(M.m[1][0]) < 1)
        throw std::domain_error("tilde: element outside the Iwahori normalizer");
    std::array<RElt, 4> quad{M.m[0][0], M.m[0][1], window.div_p(M.m[1][0], 1), M.m[1][1]};
    std::array<RElt, 4> red;
    for (int i = 0; i < 4; ++i) {
        RElt r{};
        for (int t = 0; t < level.f(); ++t) r[t] = GaloisRing::mod(quad[i][t], level.pk());
        red[i] = r;
    }
    return tilde_canon(level, eps, red);
}

template <class Container>
std::vector<TildeElt> tilde_reduce_generators(const GaloisRing& level, const GaloisRing& window,
                                              const Container& gens) {
    std::vector<TildeElt> out;
    for (const GMat& g : gens) out.push_back(tilde_from_window(level, window, g));
    return out;
}

// ----- permutations and product groups -----
struct Perm {
    std::vector<int> img;
    auto operator<=>(const Perm&) const = default;
};

inline GroupOps<Perm> perm_ops(int n) {
    GroupOps<Perm> ops;
    ops.mul = [](const Perm& a, const Perm& b) {
        Perm out;
        out.img.resize(b.img.size());
        for (size_t i = 0; i < b.img.size(); ++i) out.img[i] = a.img[b.img[i]];
        return out;
    };
    ops.inv = [](const Perm& a) {
        Perm out;
        out.img.resize(a.img.size());
        for (size_t i = 0; i < a.img.size(); ++i) out.img[a.img[i]] = (int)i;
        return out;
    };
    ops.id.img.resize(n);
    for (int i = 0; i < n; ++i) ops.id.img[i] = i;
    return ops;
}

inline int fixed_points(const Perm& p) {
    int f = 0;
    for (size_t i = 0; i < p.img.size(); ++i) f += (p.img[i] == (int)i);
    return f;
}

template <class A, class B>
GroupOps<std::pair<A, B>> pair_ops(GroupOps<A> a, GroupOps<B> b) {
    GroupOps<std::pair<A, B>> ops;
    ops.mul = [a, b](const std::pair<A, B>& x, const std::pair<A, B>& y) {
        return std::pair<A, B>{a.mul(x.first, y.first), b.mul(x.second, y.second)};
    };
    ops.inv = [a, b](const std::pair<A, B>& x) {
        return std::pair<A, B>{a.inv(x.first), b.inv(x.second)};
    };
    ops.id = {a.id, b.id};
    return ops;
}

// ----- the projective line over a residue field -----
// Points are canonical column pairs (x, 1) and (1, 0), encoded over a
// residue-field ring (k = 1).
inline std::vector<std::array<std::int64_t, 2>> projective_line(const GaloisRing& F) {
    if (F.k() != 1) throw std::domain_error("pgl: projective line needs a residue field");
    std::vector<std::array<std::int64_t, 2>> pts;
    for (std::int64_t x = 0; x < F.order(); ++x) pts.push_back({x, F.encode(F.one())});
    pts.push_back({F.encode(F.one()), 0});
    return pts;
}

inline std::array<std::int64_t, 2> pgl_act_point(const GaloisRing& F, const PglMat& g,
                                                 const std::array<std::int64_t, 2>& pt) {
    const auto m = pgl_decode(F, g);
    const RElt x = F.decode(pt[0]), y = F.decode(pt[1]);
    RElt top = F.add(F.mul(m[0], x), F.mul(m[1], y));
    RElt bot = F.add(F.mul(m[2], x), F.mul(m[3], y));
    if (F.is_unit(bot)) {
        return {F.encode(F.mul(top, F.inv(bot))), F.encode(F.one())};
    }
    if (!F.is_unit(top)) throw std::logic_error("pgl: singular action on the projective line");
    return {F.encode(F.one()), 0};
}

// The graph of a homomorphism G -> P, recovered from matched generator
// lists by closing the pairs.  Fails loudly when the map is not a
// homomorphism (the closure then outgrows the source group).
template <class A, class B>
std::map<A, B> homomorphism_graph(const GroupOps<A>& opsA, const GroupOps<B>& opsB,
                                  const std::vector<A>& gensA, const std::vector<B>& gensB,
                                  std::size_t source_order) {
    if (gensA.size() != gensB.size())
        throw std::domain_error("group: generator lists differ in length");
    std::vector<std::pair<A, B>> pg;
    for (size_t i = 0; i < gensA.size(); ++i) pg.push_back({gensA[i], gensB[i]});
    FiniteGroup<std::pair<A, B>> pairs(pair_ops(opsA, opsB), pg, 4 * source_order + 16);
    if ((std::size_t)pairs.order() != source_order)
        throw std::logic_error("group: generator correspondence is not a homomorphism");
    std::map<A, B> out;
    for (const auto& [x, y] : pairs.elements()) out.emplace(x, y);
    return out;
}

}  // namespace treecoh
