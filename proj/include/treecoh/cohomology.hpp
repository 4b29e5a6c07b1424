#pragma once

#include <complex>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "treecoh/rational.hpp"

namespace treecoh {

// Finite directed graph; parallel edges allowed (they arise for the lowest
// fiber, which uses the unoriented-cochain convention and stores both
// traversals of the base edge as distinct cells).
struct Graph {
    int nv = 0;
    std::vector<std::pair<int, int>> edges;  // (tail, head)

    int add_vertex() { return nv++; }
    int add_edge(int u, int v) {
        if (u < 0 || v < 0 || u >= nv || v >= nv)
            throw std::out_of_range("graph: edge endpoint out of range");
        edges.emplace_back(u, v);
        return (int)edges.size() - 1;
    }
    int ne() const { return (int)edges.size(); }
};

// Connected-component labels in [0, h0), numbered by smallest member vertex.
inline std::vector<int> component_labels(const Graph& g) {
    std::vector<int> parent(g.nv);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [u, v] : g.edges) {
        int ru = find(u), rv = find(v);
        if (ru != rv) parent[std::max(ru, rv)] = std::min(ru, rv);
    }
    std::vector<int> label(g.nv, -1);
    int next = 0;
    for (int v = 0; v < g.nv; ++v) {
        int r = find(v);
        if (label[r] < 0) label[r] = next++;
        label[v] = label[r];
    }
    return label;
}

inline int h0(const Graph& g) {
    const auto labels = component_labels(g);
    int m = 0;
    for (int l : labels) m = std::max(m, l + 1);
    return m;
}

// dim H^1 = E - V + h0 for a finite graph (rank-nullity of the coboundary).
inline int h1(const Graph& g) { return g.ne() - g.nv + h0(g); }

inline int euler_characteristic(const Graph& g) { return g.nv - g.ne(); }

// Exact rank over Q of the E x V coboundary matrix (df([a,b]) = f(b) - f(a),
// row e has +1 at its head and -1 at its tail).  Sparse Gaussian
// elimination; every row keeps at most two nonzero entries throughout,
// because subtracting a two-entry pivot row from a row sharing the pivot
// column just swaps one endpoint for the pivot row's other endpoint.
inline int coboundary_rank_exact(const Graph& g) {
    std::vector<std::map<int, Rational>> rows(g.ne());
    std::vector<std::set<int>> at_col(g.nv);
    for (int e = 0; e < g.ne(); ++e) {
        auto [u, v] = g.edges[e];
        if (u == v) continue;
        rows[e][v] = Rational(1);
        rows[e][u] = Rational(-1);
        at_col[u].insert(e);
        at_col[v].insert(e);
    }
    std::vector<bool> used(g.ne(), false);
    int rank = 0;
    for (int col = 0; col < g.nv; ++col) {
        int piv = -1;
        for (int e : at_col[col])
            if (!used[e]) { piv = e; break; }
        if (piv < 0) continue;
        ++rank;
        used[piv] = true;
        const Rational pc = rows[piv][col];
        const std::vector<int> touching(at_col[col].begin(), at_col[col].end());
        for (int s : touching) {
            if (s == piv || used[s]) continue;
            const Rational factor = rows[s][col] / pc;
            for (const auto& [c2, v2] : rows[piv]) {
                auto it = rows[s].find(c2);
                Rational nv = (it == rows[s].end() ? Rational(0) : it->second) - factor * v2;
                if (nv.is_zero()) {
                    if (it != rows[s].end()) {
                        rows[s].erase(it);
                        at_col[c2].erase(s);
                    }
                } else {
                    if (it == rows[s].end()) at_col[c2].insert(s);
                    rows[s][c2] = nv;
                }
            }
        }
        // the pivot row stays registered in used[]; clear its column entries
        for (const auto& [c2, v2] : rows[piv]) at_col[c2].erase(piv);
    }
    return rank;
}

// Dimension of the space of harmonic 1-cochains: cochains whose signed sums
// over the edges at every vertex vanish.  Equals E - rank of the vertex
// condition system, which is the transposed coboundary.
inline int harmonic_dim_exact(const Graph& g) { return g.ne() - coboundary_rank_exact(g); }

// Largest absolute violation of the harmonic vertex conditions by a
// complex-valued 1-cochain.
inline double harmonic_violation(const Graph& g, const std::vector<std::complex<double>>& f) {
    if ((int)f.size() != g.ne()) throw std::domain_error("cochain size mismatch");
    std::vector<std::complex<double>> sum(g.nv, 0.0);
    for (int e = 0; e < g.ne(); ++e) {
        sum[g.edges[e].second] += f[e];
        sum[g.edges[e].first] -= f[e];
    }
    double worst = 0;
    for (const auto& s : sum) worst = std::max(worst, std::abs(s));
    return worst;
}

// Extract one component as a graph of its own; optional maps give, for each
// new vertex/edge index, the index in the parent graph.
inline Graph component_subgraph(const Graph& g, const std::vector<int>& labels, int which,
                                std::vector<int>* vertex_map = nullptr,
                                std::vector<int>* edge_map = nullptr) {
    Graph sub;
    std::vector<int> newid(g.nv, -1);
    std::vector<int> vmap, emap;
    for (int v = 0; v < g.nv; ++v)
        if (labels[v] == which) {
            newid[v] = sub.add_vertex();
            vmap.push_back(v);
        }
    for (int e = 0; e < g.ne(); ++e) {
        auto [u, v] = g.edges[e];
        if (labels[u] != which) continue;
        sub.add_edge(newid[u], newid[v]);
        emap.push_back(e);
    }
    if (vertex_map) *vertex_map = std::move(vmap);
    if (edge_map) *edge_map = std::move(emap);
    return sub;
}

// (h0, h1, euler) with the rank cross-check wired in: h1 from the Euler
// count must agree with the exact-rank computation.
struct HDims {
    int h0 = 0, h1 = 0, euler = 0;
};
inline HDims h_dims_checked(const Graph& g) {
    HDims d;
    d.h0 = h0(g);
    d.h1 = g.ne() - g.nv + d.h0;
    d.euler = g.nv - g.ne();
    const int rank = coboundary_rank_exact(g);
    if (rank != g.nv - d.h0)
        throw std::logic_error("cohomology: exact rank disagrees with component count");
    if (g.ne() - rank != d.h1)
        throw std::logic_error("cohomology: exact corank disagrees with Euler count");
    return d;
}

}  // namespace treecoh
