#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "treecoh/reptheory.hpp"

using namespace treecoh;

namespace {
TruncatedTree make_tree(std::int64_t p, int f, int radius) {
    return TruncatedTree(GaloisRing(p, f, radius + 2), radius);
}

template <class E>
int dim_of(const FiniteGroup<E>& G, const ClassFunction& chi) {
    return (int)require_near_real_integer(chi.v.at(G.class_of(G.id_index())), 1e-6, "dim");
}

template <class E>
double rounded_inner(const FiniteGroup<E>& G, const ClassFunction& a, const ClassFunction& b) {
    return require_near_real_integer(inner_product(G, a, b), 1e-6, "inner product");
}
}  // namespace

TEST_CASE("boundary fiber cochain identities and Whittaker inventory") {
    for (std::int64_t p : {3, 5, 7}) {
        auto t = make_tree(p, 1, 2);
        GgReport rep = gelfand_graev_check(t);
        CAPTURE(p);
        CAPTURE(rep.detail);
        CHECK(rep.pass);
        CHECK(rep.dim_h1 == (int)(p * p - p - 1));
    }
    // frozen constituent inventories of H1 of the level-one fiber
    auto t3 = make_tree(3, 1, 2);
    CHECK(gelfand_graev_check(t3).h1_constituents ==
          std::map<std::string, int>{{"st_sgn", 1}, {"cusp_1", 1}});
    auto t5 = make_tree(5, 1, 2);
    CHECK(gelfand_graev_check(t5).h1_constituents ==
          std::map<std::string, int>{{"st_sgn", 1}, {"ps_1", 1}, {"cusp_1", 1}, {"cusp_2", 1}});
}

TEST_CASE("level-zero fiber carries the trivial character") {
    auto t = make_tree(3, 1, 2);
    GaloisRing L(3, 1, 2);
    FiberGraph f0 = build_fiber(t, 0);
    auto fa = build_tilde_fiber_action(t, f0, L, gens_Itilde(t.ring()));
    CHECK(fa.G.order() == 972);
    for (int c = 0; c < fa.G.class_count(); ++c)
        CHECK(std::abs(fa.h1.v[c] - cx(1.0)) < 1e-9);
    CHECK(rounded_inner(fa.G, fa.h1, trivial_character(fa.G)) == 1.0);
}

TEST_CASE("even fiber action, component stabilizer, and induction") {
    auto t = make_tree(3, 1, 3);
    const GaloisRing& W = t.ring();
    GaloisRing L(3, 1, 2), F(3, 1, 1);
    FiberGraph f2 = build_fiber(t, 2);
    auto gens = gens_Itilde(W);
    auto fa = build_tilde_fiber_action(t, f2, L, gens);
    CHECK(fa.G.order() == 972);
    CHECK(dim_of(fa.G, fa.h1) == 8);
    CHECK(f2.ncomp * 4 == 8);  // components times (q-1)^2

    // permutation image of the full generator set has order 36; dropping the
    // flip halves it to the setwise component stabilizer image of order
    // (q-1) q^2 = 18
    std::vector<Perm> pgens, pgens_noflip;
    for (const GMat& g : gens) pgens.push_back(fiber_cell_perm(t, f2, g));
    {
        auto ig = gens_I(W);
        ig.insert(ig.end(), {gens_T0(W)[0]});
        for (const GMat& g : ig) pgens_noflip.push_back(fiber_cell_perm(t, f2, g));
    }
    const int ncell = f2.graph.nv + f2.graph.ne();
    CHECK(FiniteGroup<Perm>(perm_ops(ncell), pgens).order() == 36);
    CHECK(FiniteGroup<Perm>(perm_ops(ncell), pgens_noflip).order() == 18);

    // the deep part T^1 I_2 acts trivially on each single component
    std::vector<GMat> deep = gens_In(W, 2);
    for (const RElt& e : detail::additive_basis(W))
        deep.push_back(g_diag(W, W.add(W.one(), W.mul(detail::p_power(W, 1), e))));
    for (const GMat& g : deep) {
        Perm pm = fiber_cell_perm(t, f2, g);
        for (int v = 0; v < f2.graph.nv; ++v)
            if (f2.comp[v] == 0) CHECK(pm.img[v] == v);
        for (int e = 0; e < f2.graph.ne(); ++e)
            if (f2.comp[f2.graph.edges[e].first] == 0) CHECK(pm.img[f2.graph.nv + e] == f2.graph.nv + e);
    }

    // H1 of the whole fiber is induced from H1 of one component over the
    // setwise stabilizer
    std::vector<TildeElt> stab_elts;
    int first0 = 0;
    while (f2.comp[first0] != 0) ++first0;
    for (int i = 0; i < fa.G.order(); ++i) {
        const Perm& pm = fa.act.at(fa.G.at(i));
        if (f2.comp[pm.img[first0]] == 0) stab_elts.push_back(fa.G.at(i));
    }
    FiniteGroup<TildeElt> St(fa.G.ops(), stab_elts);
    CHECK(St.order() == 486);
    auto comp_h1 = [&](const TildeElt& s) {
        const Perm& pm = fa.act.at(s);
        int fv = 0, fe = 0;
        for (int v = 0; v < f2.graph.nv; ++v)
            if (f2.comp[v] == 0 && pm.img[v] == v) ++fv;
        for (int e = 0; e < f2.graph.ne(); ++e)
            if (f2.comp[f2.graph.edges[e].first] == 0 &&
                pm.img[f2.graph.nv + e] == f2.graph.nv + e)
                ++fe;
        return cx((double)(fe - fv + 1));
    };
    ClassFunction h1_comp = class_function_from<TildeElt>(St, comp_h1);
    ClassFunction ind = induce_from(fa.G, St, h1_comp);
    for (int c = 0; c < fa.G.class_count(); ++c)
        CHECK(std::abs(ind.v[c] - fa.h1.v[c]) < 1e-9);
}

TEST_CASE("alpha characters on the even filtration quotient") {
    auto t = make_tree(3, 1, 3);
    const GaloisRing& W = t.ring();
    GaloisRing L(3, 1, 2), F(3, 1, 1);
    FiberGraph f2 = build_fiber(t, 2);
    auto fa = build_tilde_fiber_action(t, f2, L, gens_Itilde(W));
    FiniteGroup<TildeElt> A(tilde_ops(L), tilde_reduce_generators(L, W, gens_In(W, 1)));
    CHECK(A.order() == 243);

    CHECK_THROWS_AS(alpha_iwahori(L, 1, F, F.zero(), F.one()), std::domain_error);

    // every nontrivial pair is a genuine character and appears in H1 with
    // multiplicity #components = 2
    std::map<std::pair<int, int>, std::vector<int>> alphas;
    for (int j1 = 1; j1 <= 2; ++j1)
        for (int j2 = 1; j2 <= 2; ++j2) {
            auto f = alpha_iwahori(L, 1, F, F.decode(j1), F.decode(j2));
            auto expv = abelian_exponents<TildeElt>(A, f);
            validate_exponent_character(A, expv, 3);
            CHECK(abelian_multiplicity(fa.G, fa.h1, A, expv, 3) == 2.0);
            alphas[{j1, j2}] = expv;
        }

    // torus conjugation sends (chi1, chi2) to (chi1(t .), chi2(t^-1 .))
    {
        const GMat tor = g_diag(W, W.from_int(2));
        const TildeElt te = tilde_from_window(L, W, tor);
        // ratio of diag(2, 1) is 2: (1,1) <-> (2,2), (1,2) <-> (2,1)
        CHECK(conjugate_exponents(fa.G, A, alphas[{1, 1}], te) == alphas[{2, 2}]);
        CHECK(conjugate_exponents(fa.G, A, alphas[{1, 2}], te) == alphas[{2, 1}]);
    }

    // Clifford families: two orbits, each stabilizer of index 2 with cyclic
    // quotient of order 2, giving four induced candidates of dimension 2,
    // norm 1, multiplicity 1; together they exhaust H1
    double total = 0;
    std::set<std::vector<int>> seen;
    for (const auto& [jj, expv] : alphas) {
        if (seen.count(expv)) continue;
        auto fam = clifford_candidates(fa.G, A, expv, 3);
        for (const auto& o : fam.orbit) seen.insert(o);
        CHECK(fam.orbit.size() == 2);
        CHECK(fam.stabilizer_order == 486);
        CHECK(fam.e == 2);
        CHECK(fam.candidates.size() == 2);
        for (const ClassFunction& cand : fam.candidates) {
            CHECK(require_near_real_integer(cand.v[fa.G.class_of(fa.G.id_index())], 1e-6,
                                            "cand dim") == 2.0);
            CHECK(rounded_inner(fa.G, cand, cand) == 1.0);
            CHECK(rounded_inner(fa.G, fa.h1, cand) == 1.0);
            total += 2.0;
        }
    }
    CHECK(seen.size() == 4);
    CHECK(total == 8.0);
}

TEST_CASE("congruence characters on the odd fiber") {
    auto t = make_tree(3, 1, 3);
    const GaloisRing& W = t.ring();
    GaloisRing L(3, 1, 2), F(3, 1, 1);
    FiberGraph f3 = build_fiber(t, 3);
    auto fa = build_pgl_fiber_action(t, f3, L, gens_K(W));
    CHECK(fa.G.order() == 648);
    CHECK(dim_of(fa.G, fa.h1) == 48);
    FiniteGroup<PglMat> A(pgl_ops(L), pgl_reduce_generators(L, gens_Kn(W, 1)));
    CHECK(A.order() == 27);

    // all 27 trace-zero parameters: multiplicity 2 on split, 4 on elliptic,
    // 0 on zero and nilpotent
    int nzero = 0, nnilp = 0, nsplit = 0, nell = 0;
    double dimsum = 0;
    std::vector<int> split_exp, ell_exp;
    for (int b0 = 0; b0 < 3; ++b0)
        for (int b1 = 0; b1 < 3; ++b1)
            for (int b2 = 0; b2 < 3; ++b2) {
                const RElt e0 = F.decode(b0), e1 = F.decode(b1), e2 = F.decode(b2);
                auto f = psi_beta_maximal(L, 1, F, e0, e1, e2);
                auto expv = abelian_exponents<PglMat>(A, f);
                validate_exponent_character(A, expv, 3);
                const double m = abelian_multiplicity(fa.G, fa.h1, A, expv, 3);
                // -det beta = b0^2 + b1 b2 decides the type
                const RElt disc = F.add(F.mul(e0, e0), F.mul(e1, e2));
                if (b0 == 0 && b1 == 0 && b2 == 0) {
                    ++nzero;
                    CHECK(m == 0.0);
                } else if (F.is_zero(disc)) {
                    ++nnilp;
                    CHECK(m == 0.0);
                } else if (F.is_square_in_residue(disc)) {
                    ++nsplit;
                    CHECK(m == 2.0);
                    split_exp = expv;
                } else {
                    ++nell;
                    CHECK(m == 4.0);
                    ell_exp = expv;
                }
                dimsum += m;
            }
    CHECK(nzero == 1);
    CHECK(nnilp == 8);
    CHECK(nsplit == 12);
    CHECK(nell == 6);
    CHECK(dimsum == 12.0 * 2 + 6.0 * 4);

    // split family: orbit 12, stabilizer 54, quotient of order 2, two
    // candidates of dimension 12
    auto fs = clifford_candidates(fa.G, A, split_exp, 3);
    CHECK(fs.orbit.size() == 12);
    CHECK(fs.stabilizer_order == 54);
    CHECK(fs.e == 2);
    CHECK(fs.candidates.size() == 2);
    for (const ClassFunction& cand : fs.candidates) {
        CHECK(dim_of(fa.G, cand) == 12);
        CHECK(rounded_inner(fa.G, cand, cand) == 1.0);
        CHECK(rounded_inner(fa.G, fa.h1, cand) == 1.0);
    }

    // elliptic family: orbit 6, stabilizer 108, cyclic quotient of order 4,
    // four candidates of dimension 6
    auto fe = clifford_candidates(fa.G, A, ell_exp, 3);
    CHECK(fe.orbit.size() == 6);
    CHECK(fe.stabilizer_order == 108);
    CHECK(fe.e == 4);
    CHECK(fe.candidates.size() == 4);
    double tot = 0;
    for (const ClassFunction& cand : fe.candidates) {
        CHECK(dim_of(fa.G, cand) == 6);
        CHECK(rounded_inner(fa.G, cand, cand) == 1.0);
        CHECK(rounded_inner(fa.G, fa.h1, cand) == 1.0);
        tot += 6;
    }
    CHECK(2 * 12 + tot == 48);

    // no level-zero inflation appears: nothing is fixed by the congruence
    // subgroup beyond what the zero character already counted
    CHECK(abelian_multiplicity(fa.G, fa.h1, A,
                               std::vector<int>(A.order(), 0), 3) == 0.0);
}

TEST_CASE("stratum classification against the splitting oracle") {
    for (auto [p, f] : std::vector<std::pair<std::int64_t, int>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}}) {
        GaloisRing F(p, f, 1);
        CAPTURE(p);
        CAPTURE(f);
        for (std::int64_t cu = 0; cu < F.order(); ++cu)
            for (std::int64_t cv = 0; cv < F.order(); ++cv) {
                const RElt u = F.decode(cu), v = F.decode(cv);
                if (!F.is_unit(u) || !F.is_unit(v)) {
                    CHECK_THROWS_AS(classify_stratum(F, false, u, v), std::domain_error);
                    continue;
                }
                CHECK(classify_stratum(F, true, u, v) == StratumClass::RamifiedSimple);
                const StratumClass c = classify_stratum(F, false, u, v);
                CHECK((c == StratumClass::SplitFundamental) == stratum_oracle_splits(F, u, v));
            }
    }
    GaloisRing F7(7, 1, 1);
    CHECK(classify_stratum(F7, false, F7.one(), F7.one()) == StratumClass::SplitFundamental);
    GaloisRing F3(3, 1, 1);
    CHECK(classify_stratum(F3, false, F3.one(), F3.decode(2)) == StratumClass::SimpleNonScalar);
}

TEST_CASE("principal series types at conductor two, p = 3") {
    GaloisRing L(3, 1, 2);
    FiniteGroup<PglMat> G(pgl_ops(L), pgl_reduce_generators(L, gens_K(L)));
    CHECK(G.order() == 648);
    for (std::int64_t j : {1, 2, 4, 5}) {
        PsReport rep = principal_series_type_check(G, L, j);
        CAPTURE(j);
        CHECK(rep.hypothesis_ok);
        CHECK(rep.conductor_ok);
        CHECK(rep.dim == 12);
        CHECK(rep.norm == 1.0);
    }
    // quadratic and trivial characters fall outside the hypothesis; the
    // computation still reports the observed norm
    for (std::int64_t j : {0, 3}) {
        PsReport rep = principal_series_type_check(G, L, j);
        CAPTURE(j);
        CHECK_FALSE(rep.hypothesis_ok);
        CHECK_FALSE(rep.conductor_ok);
        CHECK(rep.norm == 3.0);
    }
}

TEST_CASE("principal series types for p = 5 at both conductors") {
    {
        GaloisRing L(5, 1, 1);
        FiniteGroup<PglMat> G(pgl_ops(L), pgl_reduce_generators(L, gens_K(L)));
        for (std::int64_t j : {1, 3}) {
            PsReport rep = principal_series_type_check(G, L, j);
            CHECK(rep.hypothesis_ok);
            CHECK(rep.conductor_ok);
            CHECK(rep.dim == 6);
            CHECK(rep.norm == 1.0);
        }
        PsReport quad = principal_series_type_check(G, L, 2);
        CHECK_FALSE(quad.hypothesis_ok);
        CHECK(quad.conductor_ok);  // the quadratic character still has exact conductor 1
        CHECK(quad.norm == 2.0);
    }
    {
        GaloisRing L(5, 1, 2);
        FiniteGroup<PglMat> G(pgl_ops(L), pgl_reduce_generators(L, gens_K(L)));
        CHECK(G.order() == 15000);
        for (std::int64_t j = 0; j < 20; ++j) {
            PsReport rep = principal_series_type_check(G, L, j);
            CAPTURE(j);
            if (j % 5 == 0) {
                CHECK_FALSE(rep.conductor_ok);
                continue;
            }
            if (j == 10) continue;  // handled above: 10 is a multiple of 5
            CHECK(rep.hypothesis_ok);
            CHECK(rep.conductor_ok);
            CHECK(rep.dim == 30);
            CHECK(rep.norm == 1.0);
        }
    }
}

TEST_CASE("split candidates match induced principal series") {
    auto t = make_tree(3, 1, 3);
    GaloisRing L(3, 1, 2), F(3, 1, 1);
    FiberGraph f3 = build_fiber(t, 3);
    auto fa = build_pgl_fiber_action(t, f3, L, gens_K(t.ring()));
    FiniteGroup<PglMat> A(pgl_ops(L), pgl_reduce_generators(L, gens_Kn(t.ring(), 1)));
    auto expv = abelian_exponents<PglMat>(
        A, psi_beta_maximal(L, 1, F, F.zero(), F.one(), F.one()));
    auto fam = clifford_candidates(fa.G, A, expv, 3);
    REQUIRE(fam.candidates.size() == 2);

    // each candidate matches the induced series of exactly one inverse pair
    // of admissible characters
    std::map<std::int64_t, int> match;  // j -> candidate index
    for (std::int64_t j : {1, 2, 4, 5}) {
        PsReport rep = principal_series_type_check(fa.G, L, j);
        int hits = 0;
        for (int i = 0; i < 2; ++i) {
            const double m = rounded_inner(fa.G, fam.candidates[i], rep.induced);
            if (m == 1.0) {
                match[j] = i;
                ++hits;
            } else {
                CHECK(m == 0.0);
            }
        }
        CHECK(hits == 1);
    }
    CHECK(match[1] == match[5]);
    CHECK(match[2] == match[4]);
    CHECK(match[1] != match[2]);
}

TEST_CASE("filtration pair containment for split candidates") {
    auto t = make_tree(3, 1, 3);
    GaloisRing L(3, 1, 2), F(3, 1, 1);
    FiberGraph f3 = build_fiber(t, 3);
    auto fa = build_pgl_fiber_action(t, f3, L, gens_K(t.ring()));
    FiniteGroup<PglMat> A(pgl_ops(L), pgl_reduce_generators(L, gens_Kn(t.ring(), 1)));
    auto expv = abelian_exponents<PglMat>(
        A, psi_beta_maximal(L, 1, F, F.zero(), F.one(), F.one()));
    auto fam = clifford_candidates(fa.G, A, expv, 3);

    // psi_alpha and psi_-alpha are distinct characters of the deep subgroup
    {
        FiniteGroup<PglMat> Hn(pgl_ops(L), pgl_reduce_generators(L, gens_h1(t.ring(), 1, 1)));
        auto e1 = abelian_exponents<PglMat>(Hn, psi_alpha_pair(L, 1, F, F.one()));
        auto e2 = abelian_exponents<PglMat>(Hn, psi_alpha_pair(L, 1, F, F.decode(2)));
        CHECK(e1 != e2);
    }

    for (const ClassFunction& cand : fam.candidates)
        for (std::int64_t a : {1, 2}) {
            auto rep = pair_containment_check(fa.G, cand, t, L, 1, F.decode(a));
            CAPTURE(a);
            CHECK(rep.applicable);
            CHECK(rep.pass);
            CHECK(rep.mult_n == 3.0);
            CHECK(rep.mult_0 == 1.0);
        }

    // a character without the deep containment is vacuously fine
    auto rep = pair_containment_check(fa.G, trivial_character(fa.G), t, L, 1, F.one());
    CHECK_FALSE(rep.applicable);
    CHECK(rep.pass);
    CHECK(rep.mult_n == 0.0);
}
