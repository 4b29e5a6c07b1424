#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "treecoh/cohomology.hpp"
#include "treecoh/tree.hpp"

namespace treecoh {

// A finite fiber of the tower over the base tree (or a truncated tower
// level): vertices are oriented n-paths, edges are oriented (n+1)-paths,
// with tail = drop-last and head = drop-first.
struct FiberGraph {
    int n = 0;                                // tower level
    Graph graph;                              // directed cell graph
    std::vector<std::vector<int>> vcell;      // tree-vertex sequence per graph vertex
    std::vector<std::vector<int>> ecell;      // per graph edge
    std::vector<int> side;                    // 0 = anchor at the low middle position
    std::vector<int> comp;                    // component label per graph vertex
    int ncomp = 0;
    std::vector<std::vector<int>> labels;     // per component: its (n-1)-path label
    std::map<std::vector<int>, int> vindex;   // cell sequence -> graph vertex id

    int vertices() const { return graph.nv; }
    int edges() const { return graph.ne(); }
};

namespace detail {

inline std::vector<int> drop_first(const std::vector<int>& w) {
    return {w.begin() + 1, w.end()};
}
inline std::vector<int> drop_last(const std::vector<int>& w) {
    return {w.begin(), w.end() - 1};
}

// Assemble a fiber graph from its vertex and edge cells.  `side_of` returns
// 0 when the cell's anchor sits at the low middle position (component label
// = drop-last) and 1 otherwise (label = drop-first).
template <class SideFn>
FiberGraph assemble(int n, std::vector<std::vector<int>> vcells,
                    const std::vector<std::vector<int>>& ecells, SideFn side_of) {
    std::sort(vcells.begin(), vcells.end());
    vcells.erase(std::unique(vcells.begin(), vcells.end()), vcells.end());
    FiberGraph fg;
    fg.n = n;
    fg.vcell = std::move(vcells);
    for (const auto& c : fg.vcell) {
        fg.vindex[c] = fg.graph.add_vertex();
        fg.side.push_back(side_of(c));
    }
    for (const auto& w : ecells) {
        auto ti = fg.vindex.find(drop_last(w));
        auto hi = fg.vindex.find(drop_first(w));
        if (ti == fg.vindex.end() || hi == fg.vindex.end())
            throw std::logic_error("fibers: edge cell with a missing face");
        fg.graph.add_edge(ti->second, hi->second);
        fg.ecell.push_back(w);
    }
    fg.comp = component_labels(fg.graph);
    fg.ncomp = h0(fg.graph);
    // Component labels: every member cell must project to the same
    // (n-1)-path under its side rule; this is the component-indexing lemma
    // at desk scale, enforced structurally.
    fg.labels.assign(fg.ncomp, {});
    std::vector<bool> seen(fg.ncomp, false);
    for (int v = 0; v < fg.graph.nv; ++v) {
        std::vector<int> lab =
            fg.side[v] == 0 ? drop_last(fg.vcell[v]) : drop_first(fg.vcell[v]);
        if (!seen[fg.comp[v]]) {
            fg.labels[fg.comp[v]] = lab;
            seen[fg.comp[v]] = true;
        } else if (fg.labels[fg.comp[v]] != lab) {
            throw std::logic_error("fibers: component members disagree on the label");
        }
    }
    // labels must be pairwise distinct across components of one fiber
    std::set<std::vector<int>> uniq(fg.labels.begin(), fg.labels.end());
    if ((int)uniq.size() != fg.ncomp)
        throw std::logic_error("fibers: duplicate component labels in one fiber");
    return fg;
}

inline int edge_ball_reach(const TruncatedTree& t, int u, int v) {
    return std::max(t.dist(u), t.dist(v));
}

}  // namespace detail

// The lowest fiber over a base edge {u, v}: two vertex cells (u), (v) and
// both traversals of the edge as parallel edge cells (the unoriented-cochain
// convention at this level keeps both).
inline FiberGraph build_fiber_level0(const TruncatedTree& t, int u, int v) {
    if (!t.is_edge(u, v)) throw std::domain_error("fibers: base is not an edge");
    FiberGraph fg;
    fg.n = 0;
    fg.vcell = {{std::min(u, v)}, {std::max(u, v)}};
    for (const auto& c : fg.vcell) {
        fg.vindex[c] = fg.graph.add_vertex();
        fg.side.push_back(0);
    }
    for (const auto& w : {std::vector<int>{u, v}, std::vector<int>{v, u}}) {
        fg.graph.add_edge(fg.vindex.at(detail::drop_last(w)), fg.vindex.at(detail::drop_first(w)));
        fg.ecell.push_back(w);
    }
    fg.comp = component_labels(fg.graph);
    fg.ncomp = 1;
    fg.labels = {{}};
    return fg;
}

// Fiber at even tower level n = 2m over the base edge {u, v}: vertex cells
// are 2m-paths carrying the edge at middle position m-1 or m; edge cells are
// (2m+1)-paths carrying it at the exact middle position m.
inline FiberGraph build_fiber_even(const TruncatedTree& t, int m, int u, int v) {
    if (m < 1) throw std::domain_error("fibers: even level needs m >= 1");
    if (detail::edge_ball_reach(t, u, v) + m > t.radius())
        throw std::domain_error("fibers: radius too small for this fiber");
    auto low = t.paths_with_edge_at(2 * m, m - 1, u, v);
    auto high = t.paths_with_edge_at(2 * m, m, u, v);
    std::vector<std::vector<int>> vcells = low;
    vcells.insert(vcells.end(), high.begin(), high.end());
    auto ecells = t.paths_with_edge_at(2 * m + 1, m, u, v);
    auto side_of = [&](const std::vector<int>& c) {
        const bool lowside = (c[m - 1] == u && c[m] == v) || (c[m - 1] == v && c[m] == u);
        return lowside ? 0 : 1;
    };
    FiberGraph fg = detail::assemble(2 * m, std::move(vcells), ecells, side_of);
    return fg;
}

// Fiber at odd tower level n = 2m+1 over the base vertex s: vertex cells are
// (2m+1)-paths with s at middle position m or m+1; edge cells are
// (2m+2)-paths with s at the exact middle position m+1.
inline FiberGraph build_fiber_odd(const TruncatedTree& t, int m, int s) {
    if (m < 0) throw std::domain_error("fibers: odd level needs m >= 0");
    if (t.dist(s) + m + 1 > t.radius())
        throw std::domain_error("fibers: radius too small for this fiber");
    auto low = t.paths_with_vertex_at(2 * m + 1, m, s);
    auto high = t.paths_with_vertex_at(2 * m + 1, m + 1, s);
    std::vector<std::vector<int>> vcells = low;
    vcells.insert(vcells.end(), high.begin(), high.end());
    auto ecells = t.paths_with_vertex_at(2 * m + 2, m + 1, s);
    auto side_of = [&](const std::vector<int>& c) { return c[m] == s ? 0 : 1; };
    return detail::assemble(2 * m + 1, std::move(vcells), ecells, side_of);
}

// Fiber over the standard base cell: the edge [s_0, s_1] for even levels,
// the vertex s_0 for odd ones.
inline FiberGraph build_fiber(const TruncatedTree& t, int n) {
    if (n < 0) throw std::domain_error("fibers: negative level");
    if (n == 0) return build_fiber_level0(t, t.s_index(0), t.s_index(1));
    if (n % 2 == 0) return build_fiber_even(t, n / 2, t.s_index(0), t.s_index(1));
    return build_fiber_odd(t, (n - 1) / 2, t.s_index(0));
}

// The whole truncated tower level: every oriented n-path in the ball is a
// vertex, every (n+1)-path an edge.  No anchoring, no component labels.
inline FiberGraph build_truncated_tower(const TruncatedTree& t, int n) {
    if (n < 0) throw std::domain_error("fibers: negative level");
    FiberGraph fg;
    fg.n = n;
    fg.vcell = t.all_paths(n);
    for (const auto& c : fg.vcell) {
        fg.vindex[c] = fg.graph.add_vertex();
        fg.side.push_back(0);
    }
    for (const auto& w : t.all_paths(n + 1)) {
        fg.graph.add_edge(fg.vindex.at(detail::drop_last(w)), fg.vindex.at(detail::drop_first(w)));
        fg.ecell.push_back(w);
    }
    fg.comp = component_labels(fg.graph);
    fg.ncomp = h0(fg.graph);
    fg.labels.assign(fg.ncomp, {});
    return fg;
}

// True iff the component is complete bipartite between its side-1 cells
// (tails) and side-0 cells (heads), with all q^2 edges present exactly once.
inline bool component_is_complete_bipartite(const FiberGraph& fg, int which, std::int64_t q) {
    std::vector<int> lows, highs;
    for (int v = 0; v < fg.graph.nv; ++v)
        if (fg.comp[v] == which) (fg.side[v] == 0 ? lows : highs).push_back(v);
    if ((std::int64_t)lows.size() != q || (std::int64_t)highs.size() != q) return false;
    std::set<std::pair<int, int>> found;
    for (int e = 0; e < fg.graph.ne(); ++e) {
        auto [tail, head] = fg.graph.edges[e];
        if (fg.comp[tail] != which) continue;
        if (fg.side[tail] != 1 || fg.side[head] != 0) return false;
        if (!found.insert({tail, head}).second) return false;  // doubled edge
    }
    return (std::int64_t)found.size() == q * q;
}

// ----- intersection lemmas for fibers over adjacent bases -----
struct LemmaReport {
    bool pass = true;
    std::string detail;
    int pairs_sharing = 0;       // component pairs with a common cell
    int cells_shared = 0;        // total shared vertex cells
};

namespace detail {
// If the two labels chain into one longer oriented path, return it.
inline bool chain_labels(const TruncatedTree& t, const std::vector<int>& c,
                         const std::vector<int>& c2, std::vector<int>& out) {
    auto try_chain = [&](const std::vector<int>& first, const std::vector<int>& second) {
        if (std::equal(first.begin() + 1, first.end(), second.begin(), second.end() - 1) ==
            false)
            return false;
        std::vector<int> w = first;
        w.push_back(second.back());
        // must be an injective path; adjacency of the new step
        if (std::set<int>(w.begin(), w.end()).size() != w.size()) return false;
        if (!t.is_edge(w[w.size() - 2], w.back())) return false;
        out = w;
        return true;
    };
    return try_chain(c, c2) || try_chain(c2, c);
}
}  // namespace detail

// Verify, for two fibers of the same level over adjacent base cells: within
// one fiber components are disjoint with distinct labels (structural);
// across the fibers, two components share at most one vertex cell and no
// edge cell; and a pair shares exactly when its labels chain into an
// oriented path, in which case that chained path is the shared cell.
inline LemmaReport check_component_lemmas(const TruncatedTree& t, const FiberGraph& A,
                                          const FiberGraph& B) {
    LemmaReport rep;
    auto fail = [&](const std::string& why) {
        rep.pass = false;
        if (rep.detail.empty()) rep.detail = why;
    };
    if (A.n != B.n) fail("fiber levels differ");

    // observed sharing, via one global join over cell sequences
    std::map<std::pair<int, int>, std::vector<const std::vector<int>*>> shared;
    for (int v = 0; v < B.graph.nv; ++v) {
        auto it = A.vindex.find(B.vcell[v]);
        if (it == A.vindex.end()) continue;
        shared[{A.comp[it->second], B.comp[v]}].push_back(&B.vcell[v]);
    }
    for (const auto& [pr, cells] : shared) {
        rep.pairs_sharing++;
        rep.cells_shared += (int)cells.size();
        if (cells.size() > 1) fail("component pair shares more than one vertex cell");
    }

    // no shared edge cells
    std::set<std::vector<int>> a_edges(A.ecell.begin(), A.ecell.end());
    for (const auto& w : B.ecell)
        if (a_edges.count(w)) fail("fibers share an edge cell");

    // the witness rule: sharing happens exactly for chainable label pairs
    for (int alpha = 0; alpha < A.ncomp; ++alpha)
        for (int beta = 0; beta < B.ncomp; ++beta) {
            std::vector<int> w;
            const bool chains = detail::chain_labels(t, A.labels[alpha], B.labels[beta], w);
            auto it = shared.find({alpha, beta});
            const bool observed = it != shared.end();
            if (chains != observed) {
                fail("sharing does not match the chained-label rule");
                continue;
            }
            if (observed && *(it->second.front()) != w)
                fail("shared cell differs from the chained label path");
        }
    return rep;
}

// ----- component quotient and the cross-level isomorphism -----
struct QuotientCheck {
    bool pass = true;
    std::string detail;
    int vertices = 0;        // interior quotient vertices
    int edges = 0;           // interior quotient edges
    int generators_tested = 0;
};

namespace detail {
// Interior test for a level-n fiber base: all its cells (including edge
// cells) fit in the ball.
inline bool base_interior_even(const TruncatedTree& t, int m, int u, int v) {
    return edge_ball_reach(t, u, v) + m <= t.radius();
}
inline bool base_interior_odd(const TruncatedTree& t, int m, int s) {
    return t.dist(s) + m + 1 <= t.radius();
}
}  // namespace detail

// Build all fibers of level n over interior bases, form the quotient graph
// (one vertex per fiber component, one edge per shared cell, directed by the
// prefix/suffix face rule), and verify it is isomorphic, via component
// labels, to the interior part of tower level n-1.  Also checks that every
// supplied generator transports fiber components consistently with the
// label map.
inline QuotientCheck quotient_iso_check(const TruncatedTree& t, int n,
                                        const std::vector<GMat>& gens) {
    if (n < 1) throw std::domain_error("fibers: quotient needs level >= 1");
    QuotientCheck qc;
    auto fail = [&](const std::string& why) {
        qc.pass = false;
        if (qc.detail.empty()) qc.detail = why;
    };
    const int m = (n % 2 == 0) ? n / 2 : (n - 1) / 2;

    // 1. fibers over all interior bases
    struct BaseFiber {
        std::vector<int> base;  // (u, v) for even, (s) for odd
        FiberGraph fg;
    };
    std::vector<BaseFiber> fibers;
    if (n % 2 == 0) {
        for (int u = 0; u < t.vertex_count(); ++u)
            for (int v : t.neighbors(u)) {
                if (u > v) continue;
                if (!detail::base_interior_even(t, m, u, v)) continue;
                fibers.push_back({{u, v}, build_fiber_even(t, m, u, v)});
            }
    } else {
        for (int s = 0; s < t.vertex_count(); ++s) {
            if (!detail::base_interior_odd(t, m, s)) continue;
            fibers.push_back({{s}, n == 1 ? build_fiber_odd(t, 0, s)
                                          : build_fiber_odd(t, m, s)});
        }
    }

    // 2. quotient vertices = (fiber, component); global cell registry
    std::map<std::pair<int, int>, int> qid;      // (fiber idx, comp) -> quotient vertex
    std::vector<std::vector<int>> qlabel;        // quotient vertex -> component label
    for (size_t fi = 0; fi < fibers.size(); ++fi)
        for (int cmp = 0; cmp < fibers[fi].fg.ncomp; ++cmp) {
            qid[{(int)fi, cmp}] = (int)qlabel.size();
            qlabel.push_back(fibers[fi].fg.labels[cmp]);
        }
    std::map<std::vector<int>, std::vector<std::pair<int, int>>> owners;  // cell -> (fiber, comp)
    for (size_t fi = 0; fi < fibers.size(); ++fi) {
        const FiberGraph& fg = fibers[fi].fg;
        for (int v = 0; v < fg.graph.nv; ++v)
            owners[fg.vcell[v]].push_back({(int)fi, fg.comp[v]});
    }

    // 3. quotient edges from cells owned by exactly two fiber components,
    //    directed so the drop-last label is the tail
    std::map<std::vector<int>, std::pair<int, int>> qedges;  // witness -> (tail, head)
    for (const auto& [cell, os] : owners) {
        if (os.size() == 1) continue;  // boundary: the other base is not interior
        if (os.size() > 2) {
            fail("cell owned by more than two fiber components");
            continue;
        }
        const std::vector<int> lt = detail::drop_last(cell), lh = detail::drop_first(cell);
        int tail = -1, head = -1;
        for (auto [fi, cmp] : os) {
            const auto& lab = fibers[fi].fg.labels[cmp];
            if (lab == lt) tail = qid.at({fi, cmp});
            else if (lab == lh) head = qid.at({fi, cmp});
        }
        if (tail < 0 || head < 0) {
            fail("shared cell faces do not match its owners' labels");
            continue;
        }
        qedges[cell] = {tail, head};
    }
    qc.vertices = (int)qlabel.size();
    qc.edges = (int)qedges.size();

    // 4. isomorphism with the interior of tower level n-1.  Interior there:
    //    the cell's own anchor is an interior base at level n.
    auto label_interior = [&](const std::vector<int>& c) {
        if (n % 2 == 0) return detail::base_interior_even(t, m, c[m - 1], c[m]);
        return detail::base_interior_odd(t, m, c[m]);
    };
    FiberGraph lower = build_truncated_tower(t, n - 1);
    std::set<std::vector<int>> lower_interior;
    for (const auto& c : lower.vcell)
        if (label_interior(c)) lower_interior.insert(c);
    std::set<std::vector<int>> quotient_labels(qlabel.begin(), qlabel.end());
    if ((int)quotient_labels.size() != qc.vertices) fail("duplicate quotient labels");
    if (quotient_labels != lower_interior)
        fail("quotient vertex labels do not match the lower-level interior cells");
    // edges: witnesses must be exactly the lower-level edge cells with both
    // faces interior, with matching direction
    std::set<std::vector<int>> lower_edges;
    for (const auto& w : lower.ecell) {
        if (!lower_interior.count(detail::drop_last(w)) ||
            !lower_interior.count(detail::drop_first(w)))
            continue;
        lower_edges.insert(w);
        auto it = qedges.find(w);
        if (it == qedges.end()) {
            fail("lower-level edge cell missing from the quotient");
            continue;
        }
        if (qlabel[it->second.first] != detail::drop_last(w) ||
            qlabel[it->second.second] != detail::drop_first(w))
            fail("quotient edge direction violates the face rule");
    }
    for (const auto& [w, e] : qedges)
        if (!lower_edges.count(w)) fail("quotient edge without a lower-level counterpart");

    // 5. equivariance: each generator carries the fiber over b onto the
    //    fiber over g.b, matching component labels
    std::map<std::vector<int>, int> base_of;
    for (size_t fi = 0; fi < fibers.size(); ++fi) base_of[fibers[fi].base] = (int)fi;
    for (const GMat& g : gens) {
        bool used = false;
        for (const auto& bf : fibers) {
            std::vector<int> ib;
            for (int x : bf.base) {
                const int y = t.act(g, x);
                if (y < 0) break;
                ib.push_back(y);
            }
            if (ib.size() != bf.base.size()) continue;
            if (ib.size() == 2 && ib[0] > ib[1]) std::swap(ib[0], ib[1]);
            auto bit = base_of.find(ib);
            if (bit == base_of.end()) continue;  // image base is not interior
            const FiberGraph& target = fibers[bit->second].fg;
            for (int v = 0; v < bf.fg.graph.nv; ++v) {
                const auto img = t.act_path(g, bf.fg.vcell[v]);
                if (img.empty()) continue;
                auto it = target.vindex.find(img);
                if (it == target.vindex.end()) {
                    fail("generator image misses the target fiber");
                    continue;
                }
                const auto lab_img = t.act_path(g, bf.fg.labels[bf.fg.comp[v]]);
                if (lab_img.empty()) continue;
                if (target.labels[target.comp[it->second]] != lab_img)
                    fail("generator breaks the component label transport");
                used = true;
            }
        }
        if (used) qc.generators_tested++;
    }
    return qc;
}

// Edge-list text export: a one-line JSON header, then one line per edge.
inline std::string fiber_export_text(const FiberGraph& fg, std::int64_t q) {
    std::ostringstream os;
    os << "{\"n\": " << fg.n << ", \"q\": " << q << ", \"vertices\": " << fg.graph.nv
       << ", \"edges\": " << fg.graph.ne() << ", \"components\": " << fg.ncomp << "}\n";
    for (int e = 0; e < fg.graph.ne(); ++e) {
        auto [tail, head] = fg.graph.edges[e];
        os << head << " " << tail << " " << fg.comp[tail] << "\n";
    }
    return os.str();
}

}  // namespace treecoh
