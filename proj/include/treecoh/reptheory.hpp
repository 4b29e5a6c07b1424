#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "treecoh/chartable.hpp"
#include "treecoh/fibers.hpp"
#include "treecoh/group.hpp"

namespace treecoh {

// ----- finite quotient acting on a fiber -----
// The group is closed over level-ring elements; the matching permutations of
// the fiber cells are recovered through the homomorphism graph, which also
// certifies that the chosen level ring is deep enough for the action to
// factor through it.
template <class E>
struct FiberAction {
    const FiberGraph* fg = nullptr;
    FiniteGroup<E> G;
    std::map<E, Perm> act;              // on vertex cells + edge cells, concatenated
    ClassFunction c0, c1, h0, h1;       // cochain, component, and cohomology characters

    FiberAction(FiniteGroup<E> g) : G(std::move(g)) {}
};

namespace detail {
template <class E>
void fill_action_characters(FiberAction<E>& fa) {
    const FiberGraph& fg = *fa.fg;
    const int nv = fg.graph.nv, ne = fg.graph.ne();
    fa.c0.v.clear();
    fa.c1.v.clear();
    fa.h0.v.clear();
    fa.h1.v.clear();
    // first members of each component, for the component-fixing count
    std::vector<int> first(fg.ncomp, -1);
    for (int v = 0; v < nv; ++v)
        if (first[fg.comp[v]] < 0) first[fg.comp[v]] = v;
    for (int c = 0; c < fa.G.class_count(); ++c) {
        const Perm& pm = fa.act.at(fa.G.at(fa.G.class_rep(c)));
        int fv = 0, fe = 0, fc = 0;
        for (int v = 0; v < nv; ++v) fv += (pm.img[v] == v);
        for (int e = 0; e < ne; ++e) fe += (pm.img[nv + e] == nv + e);
        for (int k = 0; k < fg.ncomp; ++k) fc += (fg.comp[pm.img[first[k]]] == k);
        fa.c0.v.push_back((double)fv);
        fa.c1.v.push_back((double)fe);
        fa.h0.v.push_back((double)fc);
        fa.h1.v.push_back((double)(fe - fv + fc));
    }
}
}  // namespace detail

// Build the permutation of the fiber's cells induced by a window matrix.
inline Perm fiber_cell_perm(const TruncatedTree& t, const FiberGraph& fg, const GMat& g) {
    const int nv = fg.graph.nv;
    Perm pm;
    pm.img.resize(nv + fg.graph.ne());
    std::map<std::vector<int>, int> eindex;
    for (int e = 0; e < fg.graph.ne(); ++e) eindex[fg.ecell[e]] = e;
    for (int v = 0; v < nv; ++v) {
        const auto img = t.act_path(g, fg.vcell[v]);
        auto it = img.empty() ? fg.vindex.end() : fg.vindex.find(img);
        if (it == fg.vindex.end())
            throw std::domain_error("reptheory: generator does not preserve the fiber");
        pm.img[v] = it->second;
    }
    for (int e = 0; e < fg.graph.ne(); ++e) {
        const auto img = t.act_path(g, fg.ecell[e]);
        auto it = img.empty() ? eindex.end() : eindex.find(img);
        if (it == eindex.end())
            throw std::domain_error("reptheory: generator does not preserve the fiber");
        pm.img[nv + e] = nv + it->second;
    }
    return pm;
}

template <class E>
FiberAction<E> build_fiber_action(const TruncatedTree& t, const FiberGraph& fg,
                                  const GroupOps<E>& ops, const std::vector<GMat>& window_gens,
                                  const std::vector<E>& level_gens) {
    if (window_gens.size() != level_gens.size())
        throw std::domain_error("reptheory: generator lists differ in length");
    FiberAction<E> fa(FiniteGroup<E>(ops, level_gens));
    fa.fg = &fg;
    std::vector<Perm> pgens;
    for (const GMat& g : window_gens) pgens.push_back(fiber_cell_perm(t, fg, g));
    fa.act = homomorphism_graph(ops, perm_ops(fg.graph.nv + fg.graph.ne()), level_gens, pgens,
                                (std::size_t)fa.G.order());
    detail::fill_action_characters(fa);
    return fa;
}

inline FiberAction<PglMat> build_pgl_fiber_action(const TruncatedTree& t, const FiberGraph& fg,
                                                  const GaloisRing& level,
                                                  const std::vector<GMat>& window_gens) {
    return build_fiber_action(t, fg, pgl_ops(level), window_gens,
                              pgl_reduce_generators(level, window_gens));
}

inline FiberAction<TildeElt> build_tilde_fiber_action(const TruncatedTree& t,
                                                      const FiberGraph& fg,
                                                      const GaloisRing& level,
                                                      const std::vector<GMat>& window_gens) {
    return build_fiber_action(t, fg, tilde_ops(level), window_gens,
                              tilde_reduce_generators(level, t.ring(), window_gens));
}

// ----- decomposition against the residue-field character table -----
inline std::map<std::string, int> decompose_by_table(const FiniteGroup<PglMat>& G,
                                                     const PglCharTable& T,
                                                     const ClassFunction& chi,
                                                     double tol = 1e-6) {
    std::map<std::string, int> out;
    double dim_acc = 0;
    for (int i = 0; i < T.count(); ++i) {
        const cx ip = inner_product(G, chi, T.as_class_function(i, G));
        const double m = require_near_real_integer(ip, tol, "multiplicity of " + T.label(i));
        if (m < -tol) throw std::logic_error("reptheory: negative multiplicity for " + T.label(i));
        if (m > 0.5) {
            out[T.label(i)] = (int)m;
            dim_acc += m * (double)T.dim(i);
        }
    }
    const double dim = chi.v.at(G.class_of(G.id_index())).real();
    if (std::abs(dim_acc - dim) > tol)
        throw std::logic_error("reptheory: table decomposition misses part of the character");
    return out;
}

// ----- Whittaker induction and the boundary-graph identity -----
struct GgReport {
    bool pass = true;
    std::string detail;
    int dim_h1 = 0;
    std::map<std::string, int> h1_constituents;
};

// Verifies, over the residue field: the cochain characters of the level-one
// fiber satisfy C1 = Ind_U(psi) + 1 + St and C0 = 2 (1 + St), hence
// H1 = Ind_U(psi) - St as virtual characters; and the induced Whittaker
// character is multiplicity free with the known constituent inventory.
inline GgReport gelfand_graev_check(const TruncatedTree& t) {
    GgReport rep;
    auto fail = [&](const std::string& why) {
        rep.pass = false;
        if (rep.detail.empty()) rep.detail = why;
    };
    const GaloisRing& W = t.ring();
    GaloisRing F(W.p(), W.f(), 1);
    const std::int64_t q = F.q();

    FiberGraph omega = build_fiber(t, 1);
    auto fa = build_pgl_fiber_action(t, omega, F, gens_K(W));
    if (fa.G.order() != q * q * q - q) fail("level-one quotient has the wrong order");

    // the unipotent subgroup and a nontrivial additive character on it
    std::vector<GMat> ugens_w;
    for (const RElt& e : detail::additive_basis(W)) ugens_w.push_back(g_upper(W, e));
    FiniteGroup<PglMat> U(pgl_ops(F), pgl_reduce_generators(F, ugens_w));
    if (U.order() != q) fail("unipotent subgroup has the wrong order");
    auto psi_val = [&](const PglMat& u) {
        const auto m = pgl_decode(F, u);
        return F.psi(F.one(), m[1]);
    };
    ClassFunction psi = class_function_from<PglMat>(U, psi_val);
    ClassFunction gg = induce_from(fa.G, U, psi);

    PglCharTable T(F);
    ClassFunction st = T.as_class_function(T.index_of("st"), fa.G);
    ClassFunction one = trivial_character(fa.G);

    for (int c = 0; c < fa.G.class_count(); ++c) {
        const cx c0 = fa.c0.v[c], c1 = fa.c1.v[c];
        if (std::abs(c1 - (gg.v[c] + 1.0 + st.v[c])) > 1e-6)
            fail("edge-cell character differs from Whittaker + 1 + St");
        if (std::abs(c0 - 2.0 * (1.0 + st.v[c])) > 1e-6)
            fail("vertex-cell character differs from 2 (1 + St)");
        if (std::abs((c1 - c0 + fa.h0.v[c]) - (gg.v[c] - st.v[c])) > 1e-6)
            fail("H1 differs from Whittaker minus Steinberg");
        if (std::abs(fa.h0.v[c] - 1.0) > 1e-6) fail("boundary fiber is not connected");
    }

    // Whittaker inventory: every irreducible except the two linear ones,
    // multiplicity free
    for (int i = 0; i < T.count(); ++i) {
        const double m = require_near_real_integer(
            inner_product(fa.G, gg, T.as_class_function(i, fa.G)), 1e-6, "Whittaker mult");
        const bool linear = T.dim(i) == 1;
        if (m != (linear ? 0.0 : 1.0)) fail("Whittaker multiplicity of " + T.label(i));
    }

    rep.h1_constituents = decompose_by_table(fa.G, T, fa.h1);
    rep.dim_h1 = (int)require_near_real_integer(fa.h1.v[fa.G.class_of(fa.G.id_index())], 1e-6,
                                                "dim H1");
    if (rep.dim_h1 != (int)(q * q - q - 1)) fail("dim H1 of the boundary graph");
    std::map<std::string, int> expect;
    expect["st_sgn"] = 1;
    for (std::int64_t j = 1; j <= (q - 3) / 2; ++j) expect["ps_" + std::to_string(j)] = 1;
    for (std::int64_t j = 1; j <= (q - 1) / 2; ++j) expect["cusp_" + std::to_string(j)] = 1;
    if (rep.h1_constituents != expect) fail("H1 constituent inventory");
    return rep;
}

// ----- abelian characters with values in the p-th roots of unity -----
// Exponent vectors are exact integers, so conjugation orbits and stabilizers
// are computed without floating point.
template <class E>
std::vector<int> abelian_exponents(const FiniteGroup<E>& A,
                                   const std::function<int(const E&)>& f) {
    std::vector<int> out(A.order());
    for (int i = 0; i < A.order(); ++i) out[i] = f(A.at(i));
    return out;
}

template <class E>
void validate_exponent_character(const FiniteGroup<E>& A, const std::vector<int>& expv,
                                 std::int64_t p) {
    for (int a = 0; a < A.order(); ++a)
        for (int b = 0; b < A.order(); ++b)
            if ((expv[a] + expv[b] - expv[A.mul(a, b)]) % p != 0)
                throw std::logic_error("reptheory: exponent vector is not a character");
}

// alpha^g(a) = alpha(g a g^-1), computed inside the ambient group
template <class E>
std::vector<int> conjugate_exponents(const FiniteGroup<E>& Ghat, const FiniteGroup<E>& A,
                                     const std::vector<int>& expv, const E& g) {
    const int gi = Ghat.index(g);
    if (gi < 0) throw std::domain_error("reptheory: conjugator outside the group");
    const int gv = Ghat.inv(gi);
    std::vector<int> out(A.order());
    for (int a = 0; a < A.order(); ++a) {
        const int im = Ghat.mul(Ghat.mul(gi, Ghat.index(A.at(a))), gv);
        const int ai = A.index(Ghat.at(im));
        if (ai < 0) throw std::logic_error("reptheory: subgroup is not normal");
        out[ai] = expv[a];
    }
    return out;
}

template <class E>
double abelian_multiplicity(const FiniteGroup<E>& Ghat, const ClassFunction& chi,
                            const FiniteGroup<E>& A, const std::vector<int>& expv,
                            std::int64_t p) {
    cx s = 0.0;
    for (int a = 0; a < A.order(); ++a)
        s += value_at(Ghat, chi, A.at(a)) * std::conj(root_of_unity(p, expv[a]));
    return require_near_real_integer(s / (double)A.order(), 1e-6, "abelian multiplicity");
}

// ----- concrete extractors -----

// Character of the Iwahori-filtration quotient at even depth 2m:
// alpha(1 + (p^m a, p^(m-1) b; p^m c, p^m d)) = psi(beta1 bbar) psi(beta2 cbar),
// read off a flip-twisted quad with no flip part.
inline std::function<int(const TildeElt&)> alpha_iwahori(const GaloisRing& level, int m,
                                                         const GaloisRing& F, const RElt& beta1,
                                                         const RElt& beta2) {
    if (!F.is_unit(beta1) || !F.is_unit(beta2))
        throw std::domain_error("reptheory: alpha needs nontrivial character parameters");
    return [=](const TildeElt& g) -> int {
        if (g.eps != 0) throw std::domain_error("reptheory: alpha domain excludes the flip part");
        const RElt b = level.decode(g.m[1]), cq = level.decode(g.m[2]);
        if (level.val(b) < m - 1 || level.val(cq) < m - 1)
            throw std::domain_error("reptheory: element outside the filtration step");
        const RElt bbar = level.reduce(level.div_p(b, m - 1), 1);
        const RElt cbar = level.reduce(level.div_p(cq, m - 1), 1);
        const RElt s = F.add(F.mul(beta1, bbar), F.mul(beta2, cbar));
        return (int)GaloisRing::mod(F.trace_to_prime(s), F.p());
    };
}

// Character of the congruence quotient K_m / K_{m+1} attached to a
// trace-zero residue matrix beta = (b0, b1; b2, -b0):
// psi_beta(1 + p^m X) = psi(Tr(beta Xbar)).
inline std::function<int(const PglMat&)> psi_beta_maximal(const GaloisRing& level, int m,
                                                          const GaloisRing& F, const RElt& b0,
                                                          const RElt& b1, const RElt& b2) {
    return [=](const PglMat& g) -> int {
        const auto M = pgl_decode(level, g);
        if (!level.eq(M[0], level.one()))
            throw std::domain_error("reptheory: congruence element not scaled to 1");
        const RElt x01 = level.reduce(level.div_p(M[1], m), 1);
        const RElt x10 = level.reduce(level.div_p(M[2], m), 1);
        const RElt x11 = level.reduce(level.div_p(level.sub(M[3], level.one()), m), 1);
        // Tr(beta X) with x00 = 0: b1 x10 + b2 x01 - b0 x11
        const RElt s = F.add(F.sub(F.mul(b1, x10), F.mul(b0, x11)), F.mul(b2, x01));
        return (int)GaloisRing::mod(F.trace_to_prime(s), F.p());
    };
}

// Maximal-setting counterpart of alpha_iwahori on K_m / K_{m+1}:
// alpha(1 + p^m X) = psi(beta1 x10bar) psi(beta2 x01bar), the antidiagonal
// special case of psi_beta_maximal.
inline std::function<int(const PglMat&)> alpha_maximal(const GaloisRing& level, int m,
                                                       const GaloisRing& F, const RElt& beta1,
                                                       const RElt& beta2) {
    if (!F.is_unit(beta1) || !F.is_unit(beta2))
        throw std::domain_error("reptheory: alpha needs nontrivial character parameters");
    return psi_beta_maximal(level, m, F, F.zero(), beta1, beta2);
}

// The filtration-pair character psi_alpha(1 + (p^n a, p^j b; p^(n+1) c, p^n d))
// = psi(alpha (a - d)): after scaling the top-left corner to 1 the value is
// psi(-alpha delta) with M11 = 1 + p^n delta.
inline std::function<int(const PglMat&)> psi_alpha_pair(const GaloisRing& level, int n,
                                                        const GaloisRing& F, const RElt& alpha) {
    if (!F.is_unit(alpha))
        throw std::domain_error("reptheory: psi_alpha needs a unit parameter");
    return [=](const PglMat& g) -> int {
        const auto M = pgl_decode(level, g);
        if (!level.eq(M[0], level.one()))
            throw std::domain_error("reptheory: filtration element not scaled to 1");
        const RElt delta = level.reduce(level.div_p(level.sub(M[3], level.one()), n), 1);
        const RElt s = F.neg(F.mul(alpha, delta));
        return (int)GaloisRing::mod(F.trace_to_prime(s), F.p());
    };
}

// ----- Clifford machinery over an abelian normal subgroup -----
template <class E>
struct CliffordFamily {
    std::vector<std::vector<int>> orbit;   // exponent vectors
    int stabilizer_order = 0;
    int e = 0;                             // cyclic order of stabilizer / A
    std::vector<ClassFunction> candidates; // characters of the ambient group
};

template <class E>
CliffordFamily<E> clifford_candidates(const FiniteGroup<E>& Ghat, const FiniteGroup<E>& A,
                                      const std::vector<int>& expv, std::int64_t p) {
    CliffordFamily<E> fam;
    std::vector<int> a2g(A.order());
    for (int a = 0; a < A.order(); ++a) {
        a2g[a] = Ghat.index(A.at(a));
        if (a2g[a] < 0) throw std::domain_error("reptheory: subgroup outside the ambient group");
    }
    // right action ev.g with (ev.g)[a] = ev[g a g^-1], so ev.(gh) = (ev.g).h
    auto conj_by = [&](const std::vector<int>& ev, int gi) {
        const int gv = Ghat.inv(gi);
        std::vector<int> out(A.order());
        for (int a = 0; a < A.order(); ++a) {
            const int ai = A.index(Ghat.at(Ghat.mul(Ghat.mul(gi, a2g[a]), gv)));
            if (ai < 0) throw std::logic_error("reptheory: subgroup is not normal");
            out[a] = ev[ai];
        }
        return out;
    };

    // orbit with a transversal; the stabilizer comes from Schreier generators
    // instead of a scan over the ambient group
    std::map<std::vector<int>, int> orb_index{{expv, 0}};
    std::vector<std::vector<int>> orb{expv};
    std::vector<int> transversal{Ghat.id_index()};
    std::set<int> schreier;
    for (std::size_t i = 0; i < orb.size(); ++i)
        for (int s : Ghat.generator_indices()) {
            auto img = conj_by(orb[i], s);
            const int ti_s = Ghat.mul(transversal[i], s);
            auto it = orb_index.find(img);
            if (it == orb_index.end()) {
                orb_index.emplace(img, (int)orb.size());
                orb.push_back(std::move(img));
                transversal.push_back(ti_s);
            } else {
                schreier.insert(Ghat.mul(ti_s, Ghat.inv(transversal[it->second])));
            }
        }
    fam.orbit = orb;
    std::sort(fam.orbit.begin(), fam.orbit.end());

    std::vector<E> sgens;
    for (int a : A.generator_indices()) sgens.push_back(A.at(a));
    for (int g : schreier) sgens.push_back(Ghat.at(g));
    FiniteGroup<E> S(Ghat.ops(), sgens);
    fam.stabilizer_order = S.order();
    if ((std::size_t)S.order() * orb.size() != (std::size_t)Ghat.order())
        throw std::logic_error("reptheory: orbit-stabilizer mismatch");
    if (S.order() % A.order() != 0)
        throw std::logic_error("reptheory: abelian subgroup not inside the stabilizer");
    fam.e = S.order() / A.order();

    // a coset generator of the cyclic quotient S/A
    int pi = -1;
    for (int i = 0; i < S.order() && pi < 0; ++i) {
        if (A.contains(S.at(i))) continue;
        int x = i, k = 1;
        while (!A.contains(S.at(x))) {
            x = S.mul(x, i);
            ++k;
        }
        if (k == fam.e) pi = i;
    }
    if (fam.e == 1) pi = S.id_index();
    if (pi < 0) throw std::logic_error("reptheory: stabilizer quotient is not cyclic");

    // coset decomposition j(s): smallest j with pi^-j s inside A
    std::vector<int> cosj(S.order()), apart(S.order());
    {
        const int piv = S.inv(pi);
        for (int s = 0; s < S.order(); ++s) {
            int x = s, j = 0;
            while (!A.contains(S.at(x))) {
                x = S.mul(piv, x);
                if (++j > fam.e) throw std::logic_error("reptheory: coset escape");
            }
            cosj[s] = j;
            apart[s] = A.index(S.at(x));
        }
    }
    // alpha(pi^e) and its principal e-th root
    cx s0 = 1.0;
    if (fam.e > 1) {
        int pe = pi;
        for (int k = 1; k < fam.e; ++k) pe = S.mul(pe, pi);
        const int ai = A.index(S.at(pe));
        if (ai < 0) throw std::logic_error("reptheory: pi^e escapes the abelian subgroup");
        const cx val = root_of_unity(p, expv[ai]);
        const double two_pi = 6.283185307179586476925286766559;
        double theta = std::arg(val);
        if (theta < 0) theta += two_pi;
        s0 = std::polar(1.0, theta / (double)fam.e);
    }

    for (int i = 0; i < fam.e; ++i) {
        // extension value on s = pi^j a: zeta_e^(i j) s0^j alpha(a)
        std::vector<cx> vals(S.order());
        for (int s = 0; s < S.order(); ++s)
            vals[s] = root_of_unity(fam.e, (std::int64_t)i * cosj[s]) *
                      std::pow(s0, (double)cosj[s]) * root_of_unity(p, expv[apart[s]]);
        // must be constant on S-classes (it is a linear character)
        ClassFunction ext;
        ext.v.resize(S.class_count());
        for (int c = 0; c < S.class_count(); ++c) ext.v[c] = vals[S.class_rep(c)];
        for (int s = 0; s < S.order(); ++s)
            if (std::abs(vals[s] - ext.v[S.class_of(s)]) > 1e-9)
                throw std::logic_error("reptheory: extension is not a class function");
        fam.candidates.push_back(induce_from(Ghat, S, ext));
    }
    return fam;
}

// ----- strata -----
enum class StratumClass { RamifiedSimple, SimpleNonScalar, SplitFundamental };

inline std::string stratum_class_name(StratumClass c) {
    switch (c) {
        case StratumClass::RamifiedSimple: return "ramified-simple";
        case StratumClass::SimpleNonScalar: return "simple-non-scalar";
        case StratumClass::SplitFundamental: return "split-fundamental";
    }
    throw std::logic_error("stratum: bad class");
}

// Iwahori-order antidiagonal strata are ramified simple; maximal-order ones
// split exactly when u v is a square in the residue field.
inline StratumClass classify_stratum(const GaloisRing& F, bool iwahori_order, const RElt& u,
                                     const RElt& v) {
    if (!F.is_unit(u) || !F.is_unit(v)) throw std::domain_error("stratum: non-unit data");
    if (iwahori_order) return StratumClass::RamifiedSimple;
    return F.is_square_in_residue(F.mul(u, v)) ? StratumClass::SplitFundamental
                                               : StratumClass::SimpleNonScalar;
}

// brute-force oracle: does x^2 - uv have a root in the residue field?
inline bool stratum_oracle_splits(const GaloisRing& F, const RElt& u, const RElt& v) {
    const RElt uv = F.mul(u, v);
    for (std::int64_t x = 0; x < F.order(); ++x) {
        const RElt xe = F.decode(x);
        if (F.eq(F.mul(xe, xe), uv)) return true;
    }
    return false;
}

// ----- principal-series types at conductor n -----
struct PsReport {
    bool hypothesis_ok = true;   // chi is not of determinant form (chi^2 != 1)
    bool conductor_ok = true;
    double norm = 0;
    int dim = 0;
    std::string detail;
    ClassFunction induced;       // on the level group
};

// chi is the j-th power of a fixed generator character of the cyclic unit
// group of Z/p^n.  Builds rho_chi on the image of Gamma_0(p^n) through the
// Iwahori decomposition and induces to the full level group.
inline PsReport principal_series_type_check(const FiniteGroup<PglMat>& Gbar,
                                            const GaloisRing& level, std::int64_t j) {
    if (level.f() != 1)
        throw std::domain_error("reptheory: conductor check needs a prime residue field");
    const std::int64_t n = level.k();
    PsReport rep;

    // discrete logarithm on the cyclic unit group of Z/p^n
    const std::int64_t phi = level.pk() - level.pk() / level.p();
    std::map<std::int64_t, std::int64_t> dl;
    for (std::int64_t g = 2; g < level.pk() && dl.empty(); ++g) {
        const RElt ge = level.from_int(g);
        if (!level.is_unit(ge)) continue;
        std::map<std::int64_t, std::int64_t> table;
        RElt x = level.one();
        std::int64_t k = 0;
        do {
            table[level.encode(x)] = k++;
            x = level.mul(x, ge);
        } while (!level.eq(x, level.one()));
        if (k == phi) dl = std::move(table);
    }
    if (dl.empty()) throw std::logic_error("reptheory: unit group is not cyclic");
    auto chi = [&](const RElt& x) { return root_of_unity(phi, j * dl.at(level.encode(x))); };

    // conductor exactly n: nontrivial on the layer 1 + p^(n-1).  For n >= 2
    // that layer is cyclic of order p, so any single nontrivial element
    // probes it; for n = 1 the layer is the whole (cyclic) unit group.
    if (n == 1) {
        rep.conductor_ok = j % phi != 0;
    } else {
        const RElt probe = level.add(level.one(), detail::p_power(level, (int)n - 1));
        rep.conductor_ok = std::abs(chi(probe) - cx(1.0)) > 1e-9;
    }
    rep.hypothesis_ok = (2 * j) % phi != 0;
    if (!rep.hypothesis_ok) rep.detail = "hypothesis violated: chi is of determinant form";

    FiniteGroup<PglMat> Jbar(pgl_ops(level),
                             pgl_reduce_generators(level, gens_J(level, (int)n)));
    std::vector<cx> vals(Jbar.order());
    for (int i = 0; i < Jbar.order(); ++i) {
        const auto M = pgl_decode(level, Jbar.at(i));
        if (!level.is_zero(M[2]) || !level.eq(M[0], level.one()))
            throw std::logic_error("reptheory: congruence subgroup element out of shape");
        vals[i] = chi(level.inv(M[3]));  // chi(a d^-1) with a scaled to 1
    }
    // rho must be multiplicative on the finite group
    for (int a = 0; a < Jbar.order(); ++a)
        for (int b = 0; b < Jbar.order(); ++b)
            if (std::abs(vals[Jbar.mul(a, b)] - vals[a] * vals[b]) > 1e-9)
                throw std::logic_error("reptheory: rho_chi is not multiplicative");
    ClassFunction rho;
    rho.v.resize(Jbar.class_count());
    for (int c = 0; c < Jbar.class_count(); ++c) rho.v[c] = vals[Jbar.class_rep(c)];
    for (int i = 0; i < Jbar.order(); ++i)
        if (std::abs(vals[i] - rho.v[Jbar.class_of(i)]) > 1e-9)
            throw std::logic_error("reptheory: rho_chi is not a class function");

    rep.induced = induce_from(Gbar, Jbar, rho);
    rep.dim = (int)require_near_real_integer(rep.induced.v[Gbar.class_of(Gbar.id_index())],
                                             1e-6, "induced dimension");
    rep.norm = require_near_real_integer(inner_product(Gbar, rep.induced, rep.induced), 1e-6,
                                         "induced norm");
    return rep;
}

// ----- the filtration-pair containment check -----
struct PairContainmentReport {
    bool applicable = false;  // the representation contains psi_alpha at depth n
    bool pass = false;         // ... and then also at depth 0
    double mult_n = 0, mult_0 = 0;
};

// For a constituent chi of the level group: containing psi_alpha on the
// deep filtration pair image forces containment on the wide one.
inline PairContainmentReport pair_containment_check(const FiniteGroup<PglMat>& Q,
                                                    const ClassFunction& chi,
                                                    const TruncatedTree& t,
                                                    const GaloisRing& level, int n,
                                                    const RElt& alpha) {
    const GaloisRing& W = t.ring();
    GaloisRing F(W.p(), W.f(), 1);
    auto psi = psi_alpha_pair(level, n, F, alpha);
    PairContainmentReport rep;
    double mults[2];
    for (int which = 0; which < 2; ++which) {
        const int jj = which == 0 ? n : 0;
        FiniteGroup<PglMat> H(pgl_ops(level),
                              pgl_reduce_generators(level, gens_h1(W, n, jj)));
        auto expv = abelian_exponents<PglMat>(H, psi);
        validate_exponent_character(H, expv, F.p());
        mults[which] = abelian_multiplicity(Q, chi, H, expv, F.p());
    }
    rep.mult_n = mults[0];
    rep.mult_0 = mults[1];
    rep.applicable = rep.mult_n >= 0.5;
    rep.pass = !rep.applicable || rep.mult_0 >= 0.5;
    return rep;
}

}  // namespace treecoh
