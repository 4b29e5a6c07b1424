#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "treecoh/cohomology.hpp"
#include "treecoh/ring.hpp"

using namespace treecoh;

namespace {
// Complete bipartite K_{q,q} with all edges directed from side A to side B;
// edge (a, b) gets index a*q + b.
Graph make_kqq(int q) {
    Graph g;
    for (int i = 0; i < 2 * q; ++i) g.add_vertex();
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) g.add_edge(a, q + b);
    return g;
}
}  // namespace

TEST_CASE("small graph dimensions") {
    Graph path;  // 4-vertex path: contractible
    for (int i = 0; i < 4; ++i) path.add_vertex();
    for (int i = 0; i < 3; ++i) path.add_edge(i, i + 1);
    REQUIRE(h0(path) == 1);
    REQUIRE(h1(path) == 0);
    REQUIRE(coboundary_rank_exact(path) == 3);

    Graph cycle;  // 5-cycle: one loop
    for (int i = 0; i < 5; ++i) cycle.add_vertex();
    for (int i = 0; i < 5; ++i) cycle.add_edge(i, (i + 1) % 5);
    REQUIRE(h0(cycle) == 1);
    REQUIRE(h1(cycle) == 1);
    REQUIRE(harmonic_dim_exact(cycle) == 1);

    Graph two;  // disjoint edge + isolated vertex
    for (int i = 0; i < 3; ++i) two.add_vertex();
    two.add_edge(0, 1);
    REQUIRE(h0(two) == 2);
    REQUIRE(h1(two) == 0);

    // the lowest-fiber shape: two vertices joined by two parallel edges
    Graph theta;
    theta.add_vertex();
    theta.add_vertex();
    theta.add_edge(0, 1);
    theta.add_edge(1, 0);
    REQUIRE(h0(theta) == 1);
    REQUIRE(h1(theta) == 1);
    REQUIRE(coboundary_rank_exact(theta) == 1);
    auto d = h_dims_checked(theta);
    REQUIRE(d.h1 == 1);
    REQUIRE(d.euler == 0);
}

TEST_CASE("component machinery") {
    Graph g;
    for (int i = 0; i < 6; ++i) g.add_vertex();
    g.add_edge(0, 2);
    g.add_edge(2, 4);
    g.add_edge(1, 3);
    auto labels = component_labels(g);
    REQUIRE(labels == std::vector<int>{0, 1, 0, 1, 0, 2});
    std::vector<int> vmap, emap;
    Graph sub = component_subgraph(g, labels, 0, &vmap, &emap);
    REQUIRE(sub.nv == 3);
    REQUIRE(sub.ne() == 2);
    REQUIRE(vmap == std::vector<int>{0, 2, 4});
    REQUIRE(emap == std::vector<int>{0, 1});
}

TEST_CASE("complete bipartite components: dimension three ways") {
    for (int q : {3, 5, 7}) {
        Graph g = make_kqq(q);
        // Euler count
        REQUIRE(euler_characteristic(g) == 2 * q - q * q);
        REQUIRE(h1(g) == (q - 1) * (q - 1));
        // exact rank
        REQUIRE(harmonic_dim_exact(g) == (q - 1) * (q - 1));
        REQUIRE(coboundary_rank_exact(g) == 2 * q - 1);
        // consistency wrapper
        REQUIRE_NOTHROW(h_dims_checked(g));
    }
}

TEST_CASE("explicit harmonic basis on a bipartite component") {
    for (auto [p, f] : {std::pair{3, 1}, {5, 1}, {7, 1}}) {
        GaloisRing kq(p, f, 1);
        const int q = (int)kq.q();
        Graph g = make_kqq(q);
        // basis chi_s (x) chi_t over nontrivial additive character pairs
        std::vector<std::vector<std::complex<double>>> basis;
        for (std::int64_t s = 1; s < q; ++s)
            for (std::int64_t t = 1; t < q; ++t) {
                std::vector<std::complex<double>> fn(g.ne());
                for (int a = 0; a < q; ++a)
                    for (int b = 0; b < q; ++b)
                        fn[a * q + b] = kq.psi(kq.decode(s), kq.decode(a)) *
                                        kq.psi(kq.decode(t), kq.decode(b));
                basis.push_back(std::move(fn));
            }
        REQUIRE((int)basis.size() == (q - 1) * (q - 1));
        REQUIRE((int)basis.size() == harmonic_dim_exact(g));
        // each element satisfies the vertex conditions
        for (const auto& fn : basis) REQUIRE(harmonic_violation(g, fn) < 1e-9);
        // pairwise orthogonality (norm q^2), hence linear independence
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = i; j < basis.size(); ++j) {
                std::complex<double> ip = 0;
                for (int e = 0; e < g.ne(); ++e) ip += basis[i][e] * std::conj(basis[j][e]);
                const double expect = (i == j) ? (double)(q * q) : 0.0;
                REQUIRE(std::abs(ip - std::complex<double>{expect, 0}) < 1e-9);
            }
        // a pair with one trivial character violates harmonicity
        std::vector<std::complex<double>> bad(g.ne());
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b)
                bad[a * q + b] = kq.psi(kq.decode(1), kq.decode(b));  // 1 (x) chi_1
        REQUIRE(harmonic_violation(g, bad) > 0.5);
    }
}

TEST_CASE("rank equals vertices minus components on assorted graphs") {
    // a grid with an extra component and a parallel edge
    Graph g;
    for (int i = 0; i < 12; ++i) g.add_vertex();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            int v = r * 3 + c;
            if (c + 1 < 3) g.add_edge(v, v + 1);
            if (r + 1 < 3) g.add_edge(v, v + 3);
        }
    g.add_edge(9, 10);
    g.add_edge(9, 10);
    REQUIRE(coboundary_rank_exact(g) == g.nv - h0(g));
    REQUIRE(h1(g) == g.ne() - coboundary_rank_exact(g));
}
