#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "treecoh/reptheory.hpp"

namespace treecoh {

// One classified constituent of some H1(Sigma_n), aggregated over levels.
struct TypeLedgerEntry {
    std::string label;
    std::string kind;  // cuspidal-type | ramified-type | principal-series-type |
                       // twisted-steinberg | trivial-iwahori | level0-cuspidal
    int dim = 0;
    std::map<int, int> per_level;  // fiber level -> multiplicity
    int total() const {
        int s = 0;
        for (const auto& [k, m] : per_level) s += m;
        return s;
    }
};

struct TypesLedger {
    std::int64_t p = 0;
    int f = 0;
    std::int64_t q = 0;
    int n_max = 0;
    std::vector<TypeLedgerEntry> entries;  // sorted by (kind, dim, label)
    std::map<int, int> h1_dims;            // fiber level -> dim H1
};

namespace detail {
inline void ledger_sort(std::vector<TypeLedgerEntry>& v) {
    std::sort(v.begin(), v.end(), [](const TypeLedgerEntry& a, const TypeLedgerEntry& b) {
        return std::tie(a.kind, a.dim, a.label) < std::tie(b.kind, b.dim, b.label);
    });
}

[[noreturn]] inline void unclassifiable(int level, const std::string& why) {
    throw std::logic_error("ledger: unclassifiable constituent at level " +
                           std::to_string(level) + ": " + why);
}

// Clifford families for one abelian restriction datum; appends the surviving
// candidates as entries and returns the dimension they cover.
template <class E>
double harvest_candidates(TypesLedger& led, int level, const FiniteGroup<E>& Ghat,
                          const ClassFunction& h1, const FiniteGroup<E>& A,
                          const std::vector<int>& expv, std::int64_t p,
                          const std::string& label_stem, const std::string& kind,
                          std::set<std::vector<int>>& seen) {
    auto fam = clifford_candidates(Ghat, A, expv, p);
    for (const auto& o : fam.orbit) seen.insert(o);
    double covered = 0;
    for (std::size_t i = 0; i < fam.candidates.size(); ++i) {
        const ClassFunction& cand = fam.candidates[i];
        const double norm = require_near_real_integer(inner_product(Ghat, cand, cand), 1e-6,
                                                      "candidate norm");
        if (norm != 1.0) unclassifiable(level, "induced candidate is not irreducible");
        const double mult = require_near_real_integer(inner_product(Ghat, h1, cand), 1e-6,
                                                      "candidate multiplicity");
        if (mult < 0) unclassifiable(level, "negative multiplicity");
        if (mult == 0) continue;
        const double dim = require_near_real_integer(
            cand.v[Ghat.class_of(Ghat.id_index())], 1e-6, "candidate dimension");
        TypeLedgerEntry e;
        e.label = label_stem + "-x" + std::to_string(i);
        e.kind = kind;
        e.dim = (int)dim;
        e.per_level[level] = (int)mult;
        led.entries.push_back(e);
        covered += mult * dim;
    }
    return covered;
}
}  // namespace detail

// Classify every constituent of H1(Sigma_n) for n <= n_max into the type
// trichotomy.  Anything that escapes the classification is a hard error.
inline TypesLedger types_ledger(const TruncatedTree& t, int n_max) {
    const GaloisRing& W = t.ring();
    GaloisRing F(W.p(), W.f(), 1);
    if (F.q() > 9)
        throw std::domain_error("ledger: residue field too large for the character table");
    TypesLedger led;
    led.p = W.p();
    led.f = W.f();
    led.q = F.q();
    led.n_max = n_max;

    for (int n = 0; n <= n_max; ++n) {
        FiberGraph fg = build_fiber(t, n);
        if (n == 0) {
            // the level-zero cells are determined mod p, so the depth-one
            // quotient already acts faithfully enough for this check
            GaloisRing L(W.p(), W.f(), 1);
            auto fa = build_tilde_fiber_action(t, fg, L, gens_Itilde(W));
            const double dim = require_near_real_integer(
                fa.h1.v[fa.G.class_of(fa.G.id_index())], 1e-6, "dim H1");
            led.h1_dims[0] = (int)dim;
            for (const cx& v : fa.h1.v)
                if (std::abs(v - cx(1.0)) > 1e-6)
                    detail::unclassifiable(0, "level-zero cohomology is not the trivial character");
            TypeLedgerEntry e;
            e.label = "l0-trivial";
            e.kind = "trivial-iwahori";
            e.dim = 1;
            e.per_level[0] = 1;
            led.entries.push_back(e);
            continue;
        }
        if (n == 1) {
            auto fa = build_pgl_fiber_action(t, fg, F, gens_K(W));
            led.h1_dims[1] = (int)require_near_real_integer(
                fa.h1.v[fa.G.class_of(fa.G.id_index())], 1e-6, "dim H1");
            PglCharTable T(F);
            for (const auto& [lab, mult] : decompose_by_table(fa.G, T, fa.h1)) {
                std::string kind;
                if (lab == "st_sgn") kind = "twisted-steinberg";
                else if (lab.rfind("cusp_", 0) == 0) kind = "level0-cuspidal";
                else if (lab.rfind("ps_", 0) == 0) kind = "principal-series-type";
                else detail::unclassifiable(1, lab + " is not a depth-zero type");
                TypeLedgerEntry e;
                e.label = "l1-" + lab;
                e.kind = kind;
                e.dim = (int)T.dim(T.index_of(lab));
                e.per_level[1] = mult;
                led.entries.push_back(e);
            }
            continue;
        }
        if (n % 2 == 0) {
            // even level: Clifford analysis over the Iwahori filtration step
            const int m = n / 2;
            GaloisRing L(W.p(), W.f(), m + 1);
            auto fa = build_tilde_fiber_action(t, fg, L, gens_Itilde(W));
            const double dim = require_near_real_integer(
                fa.h1.v[fa.G.class_of(fa.G.id_index())], 1e-6, "dim H1");
            led.h1_dims[n] = (int)dim;
            FiniteGroup<TildeElt> A(tilde_ops(L),
                                    tilde_reduce_generators(L, W, gens_In(W, 2 * m - 1)));
            if (classify_stratum(F, true, F.one(), F.one()) != StratumClass::RamifiedSimple)
                detail::unclassifiable(n, "antidiagonal stratum is not ramified simple");
            std::set<std::vector<int>> seen;
            double covered = 0;
            for (std::int64_t b1 = 0; b1 < F.order(); ++b1)
                for (std::int64_t b2 = 0; b2 < F.order(); ++b2) {
                    const RElt e1 = F.decode(b1), e2 = F.decode(b2);
                    if (!F.is_unit(e1) || !F.is_unit(e2)) continue;
                    auto expv = abelian_exponents<TildeElt>(
                        A, alpha_iwahori(L, m, F, e1, e2));
                    if (seen.count(expv)) continue;
                    covered += detail::harvest_candidates(
                        led, n, fa.G, fa.h1, A, expv, F.p(),
                        "l" + std::to_string(n) + "-ram-b" + std::to_string(b1) +
                            std::to_string(b2),
                        "ramified-type", seen);
                }
            if (covered != dim)
                detail::unclassifiable(n, "ramified candidates do not exhaust the cohomology");
            continue;
        }
        // odd level >= 3: Clifford analysis over the congruence quotient
        const int m = (n - 1) / 2;
        GaloisRing L(W.p(), W.f(), m + 1);
        auto fa = build_pgl_fiber_action(t, fg, L, gens_K(W));
        const double dim = require_near_real_integer(
            fa.h1.v[fa.G.class_of(fa.G.id_index())], 1e-6, "dim H1");
        led.h1_dims[n] = (int)dim;
        FiniteGroup<PglMat> A(pgl_ops(L), pgl_reduce_generators(L, gens_Kn(W, m)));
        std::set<std::vector<int>> seen;
        double covered = 0;
        for (std::int64_t b0 = 0; b0 < F.order(); ++b0)
            for (std::int64_t b1 = 0; b1 < F.order(); ++b1)
                for (std::int64_t b2 = 0; b2 < F.order(); ++b2) {
                    const RElt e0 = F.decode(b0), e1 = F.decode(b1), e2 = F.decode(b2);
                    auto expv = abelian_exponents<PglMat>(
                        A, psi_beta_maximal(L, m, F, e0, e1, e2));
                    if (seen.count(expv)) continue;
                    const RElt disc = F.add(F.mul(e0, e0), F.mul(e1, e2));
                    if ((b0 | b1 | b2) == 0 || F.is_zero(disc)) {
                        // level-zero inflations and nilpotent data carry none
                        // of the cohomology
                        seen.insert(expv);
                        if (abelian_multiplicity(fa.G, fa.h1, A, expv, F.p()) != 0.0)
                            detail::unclassifiable(
                                n, (b0 | b1 | b2) == 0 ? "level-zero inflation present"
                                                       : "nilpotent datum carries cohomology");
                        continue;
                    }
                    const StratumClass sc = classify_stratum(F, false, F.one(), disc);
                    const bool split = sc == StratumClass::SplitFundamental;
                    covered += detail::harvest_candidates(
                        led, n, fa.G, fa.h1, A, expv, F.p(),
                        "l" + std::to_string(n) + (split ? "-ps-d" : "-cusp-d") +
                            std::to_string(F.encode(disc)),
                        split ? "principal-series-type" : "cuspidal-type", seen);
                }
        if (covered != dim)
            detail::unclassifiable(n, "congruence candidates do not exhaust the cohomology");
    }
    detail::ledger_sort(led.entries);
    return led;
}

// JSON object keys come out sorted (std::map-backed), so equal ledgers
// always serialize to identical bytes.
inline nlohmann::json ledger_json_value(const TypesLedger& led) {
    nlohmann::json out;
    out["p"] = led.p;
    out["f"] = led.f;
    out["q"] = led.q;
    out["n_max"] = led.n_max;
    out["entries"] = nlohmann::json::array();
    for (const TypeLedgerEntry& e : led.entries) {
        nlohmann::json je;
        je["label"] = e.label;
        je["kind"] = e.kind;
        je["dim"] = e.dim;
        je["per_level"] = nlohmann::json::object();
        for (const auto& [k, m] : e.per_level) je["per_level"][std::to_string(k)] = m;
        je["total"] = e.total();
        out["entries"].push_back(je);
    }
    return out;
}

inline std::string ledger_to_json(const TypesLedger& led) {
    return ledger_json_value(led).dump(2) + "\n";
}

inline std::string ledger_to_csv(const TypesLedger& led) {
    std::vector<std::tuple<int, std::string, std::string, int, int>> rows;
    for (const TypeLedgerEntry& e : led.entries)
        for (const auto& [k, m] : e.per_level) rows.emplace_back(k, e.kind, e.label, e.dim, m);
    std::sort(rows.begin(), rows.end());
    std::ostringstream os;
    os << "level,label,kind,dim,multiplicity\n";
    for (const auto& [lvl, kind, label, dim, mult] : rows)
        os << lvl << ',' << label << ',' << kind << ',' << dim << ',' << mult << '\n';
    return os.str();
}

}  // namespace treecoh
