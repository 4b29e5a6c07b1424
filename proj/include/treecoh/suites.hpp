// Verification suites behind the experiment driver.
//
// run(config) validates the configuration, builds the tree and fibers once,
// and executes the selected suites in a fixed order: ring self-tests, tree,
// fibers (suite "combinatorics"), then "cohomology", "characters", and
// "ledger".  Every computation is deterministic, so reports serialize to
// identical bytes across runs with equal configurations.
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "treecoh/chartable.hpp"
#include "treecoh/report.hpp"
#include "treecoh/reptheory.hpp"

namespace treecoh {

// Invalid configuration; the CLI maps this to exit code 2.
struct ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Smallest ball radius that supports fibers up to level n_max.
inline int minimum_radius(int n_max) { return (n_max + 1) / 2 + 2; }

namespace detail {

inline bool is_prime_i64(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::int64_t ipow_i64(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

struct FiberShape {
    std::int64_t v = 0, e = 0, comps = 0, h1 = 0;
};

// Closed-form cell counts of the level-n fiber over the standard base.
inline FiberShape expected_fiber_shape(int n, std::int64_t q) {
    if (n == 0) return {2, 2, 1, 1};
    if (n == 1) return {2 * (q + 1), q * (q + 1), 1, q * q - q - 1};
    FiberShape s;
    const int m = n / 2;
    s.comps = (n % 2 == 0) ? 2 * ipow_i64(q, 2 * m - 2) : (q + 1) * ipow_i64(q, 2 * m - 1);
    s.v = s.comps * 2 * q;
    s.e = s.comps * q * q;
    s.h1 = s.comps * (q - 1) * (q - 1);
    return s;
}

inline std::string shape_string(std::int64_t v, std::int64_t e, std::int64_t comps,
                                std::int64_t h1) {
    return "V=" + std::to_string(v) + " E=" + std::to_string(e) +
           " components=" + std::to_string(comps) + " h1=" + std::to_string(h1);
}

struct RunContext {
    std::optional<TruncatedTree> tree;
    std::map<int, FiberGraph> fiber;

    const FiberGraph& fiber_at(int n) {
        auto it = fiber.find(n);
        if (it == fiber.end()) it = fiber.emplace(n, build_fiber(*tree, n)).first;
        return it->second;
    }
};

}  // namespace detail

// Validates the configuration, filling q / radius_used / warnings on the
// report.  Throws ConfigError on anything unusable.
inline void validate_config(const RunConfig& cfg, Report& rep) {
    if (cfg.p == 2)
        throw ConfigError("p = 2 is excluded: the residue characteristic must be odd");
    if (!detail::is_prime_i64(cfg.p)) throw ConfigError("p must be an odd prime");
    if (cfg.f < 1) throw ConfigError("f must be >= 1");
    if (cfg.n_max < 0) throw ConfigError("n_max must be >= 0");
    if (cfg.format != "json" && cfg.format != "csv")
        throw ConfigError("format must be json or csv");
    if (cfg.suites.empty()) throw ConfigError("at least one suite must be selected");
    static const std::set<std::string> known = {"combinatorics", "cohomology", "characters",
                                                "ledger"};
    for (const std::string& s : cfg.suites)
        if (!known.count(s)) throw ConfigError("unknown suite: " + s);
    rep.q = detail::ipow_i64(cfg.p, cfg.f);
    if (rep.q > 9 && (cfg.suites.count("characters") || cfg.suites.count("ledger")))
        throw ConfigError("character and ledger suites are budgeted for q <= 9");
    if (rep.q > 5 && cfg.n_max >= 2 && cfg.suites.count("ledger"))
        throw ConfigError(
            "the ledger suite above level one stores one cell permutation per group element "
            "and is budgeted for q <= 5; lower n_max or q");
    const int need = minimum_radius(cfg.n_max);
    rep.radius_used = cfg.radius == 0 ? need : cfg.radius;
    if (cfg.radius != 0 && cfg.radius < need) {
        rep.radius_used = need;
        rep.warnings.push_back("radius " + std::to_string(cfg.radius) +
                               " is below the minimum for n_max = " +
                               std::to_string(cfg.n_max) + "; raised to " +
                               std::to_string(need));
    }
    double ball = 1, shell = (double)(rep.q + 1);
    for (int r = 1; r <= rep.radius_used; ++r) {
        ball += shell;
        shell *= (double)rep.q;
    }
    if (ball > 2.5e6)
        throw ConfigError("tree ball exceeds the enumeration budget; lower radius, n_max, or q");
}

namespace detail {

// ----- stage: coefficient-ring self-tests -----
inline void stage_ring(Report& rep, const RunConfig& cfg) {
    GaloisRing R2(cfg.p, cfg.f, 2), R1(cfg.p, cfg.f, 1);
    const std::int64_t q = R1.q();

    std::int64_t units = 0;
    for (std::int64_t c = 0; c < R2.order(); ++c)
        if (R2.is_unit(R2.decode(c))) ++units;
    check_eq(rep, "ring-unit-count",
             "the level-two coefficient ring has exactly q^2 - q units", units, q * q - q);

    // Teichmuller lifts: q - 1 distinct unit lifts, all of multiplicative
    // order dividing q - 1 and congruent to their argument mod p
    {
        std::set<std::int64_t> lifts;
        std::string offender;
        for (std::int64_t c = 0; c < R2.order() && offender.empty(); ++c) {
            const RElt x = R2.decode(c);
            if (!R2.is_unit(x)) continue;
            const RElt t = R2.teichmuller(x);
            lifts.insert(R2.encode(t));
            RElt pw = R2.one();
            for (std::int64_t i = 0; i < q - 1; ++i) pw = R2.mul(pw, t);
            if (!R2.eq(pw, R2.one())) offender = "lift of element " + std::to_string(c) +
                                                 " does not have order dividing q-1";
            if (!R2.eq(R2.reduce(t, 1), R2.reduce(x, 1)))
                offender = "lift of element " + std::to_string(c) + " changes the residue";
        }
        check_true(rep, "ring-teichmuller",
                   "Teichmuller lifts of the units form the q-1 roots of unity and fix residues",
                   offender.empty() && (std::int64_t)lifts.size() == q - 1,
                   offender.empty() ? std::to_string(lifts.size()) + " distinct lifts"
                                    : offender);
    }

    // the standard additive character is nontrivial with zero character sum
    {
        cx sum = 0;
        for (std::int64_t c = 0; c < R1.order(); ++c) sum += R1.psi(R1.one(), R1.decode(c));
        check_true(rep, "ring-psi-sum",
                   "the additive character of the residue field is nontrivial (zero sum)",
                   std::abs(sum) < 1e-9, "|sum| = " + std::to_string(std::abs(sum)));
    }

    // absolute trace is onto the prime field
    {
        std::set<std::int64_t> img;
        for (std::int64_t c = 0; c < R1.order(); ++c)
            img.insert(R1.trace_to_prime(R1.decode(c)));
        check_eq(rep, "ring-trace-onto",
                 "the absolute trace of the residue field hits every prime-field value",
                 (std::int64_t)img.size(), cfg.p);
    }

    // valuation / exact division round-trip on the level-two ring
    {
        std::string offender;
        for (std::int64_t c = 1; c < R2.order() && offender.empty(); ++c) {
            const RElt x = R2.decode(c);
            if (R2.is_zero(x)) continue;
            if (!R2.is_unit(R2.div_p(x, R2.val(x))))
                offender = "element " + std::to_string(c);
        }
        check_true(rep, "ring-valuation",
                   "dividing out p^val leaves a unit for every nonzero element",
                   offender.empty(), offender.empty() ? "all nonzero elements" : offender);
    }
}

// ----- stage: tree ball -----
inline void stage_tree(Report& rep, RunContext& ctx) {
    const TruncatedTree& t = *ctx.tree;
    const std::int64_t q = t.ring().q();
    const int r = t.radius();

    std::int64_t expect = 1;
    {
        std::int64_t shell = q + 1;
        for (int i = 1; i <= r; ++i) {
            expect += shell;
            shell *= q;
        }
    }
    check_eq(rep, "tree-ball-size",
             "the radius-" + std::to_string(r) + " ball of the (q+1)-regular tree has 1 + "
             "(q+1)(q^r - 1)/(q - 1) vertices",
             t.vertex_count(), expect);

    {
        std::string offender;
        for (int v = 0; v < t.vertex_count() && offender.empty(); ++v) {
            const std::size_t deg = t.neighbors(v).size();
            if (t.dist(v) < r && (std::int64_t)deg != q + 1)
                offender = "vertex " + std::to_string(v) + " has degree " + std::to_string(deg);
            if (t.dist(v) == r && deg != 1)
                offender = "boundary vertex " + std::to_string(v) + " has degree " +
                           std::to_string(deg);
        }
        check_true(rep, "tree-regular",
                   "interior vertices have degree q+1 and boundary vertices degree 1",
                   offender.empty(), offender.empty() ? "all vertices" : offender);
    }

    {
        std::string offender;
        for (int k = -r; k < r && offender.empty(); ++k) {
            const int a = t.s_index(k), b = t.s_index(k + 1);
            if (t.dist(a) != std::abs(k)) offender = "s_" + std::to_string(k) + " distance";
            if (!t.is_edge(a, b))
                offender = "s_" + std::to_string(k) + " and s_" + std::to_string(k + 1) +
                           " are not adjacent";
        }
        check_true(rep, "tree-apartment",
                   "the standard apartment is a geodesic through the origin", offender.empty(),
                   offender.empty() ? "verified to radius " + std::to_string(r) : offender);
    }
}

// ----- stage: fiber combinatorics -----
inline void stage_fibers(Report& rep, const RunConfig& cfg, RunContext& ctx) {
    const std::int64_t q = rep.q;
    for (int n = 0; n <= cfg.n_max; ++n) {
        const FiberGraph& fg = ctx.fiber_at(n);
        const FiberShape want = expected_fiber_shape(n, q);
        check_eq_str(rep, "fiber-counts-n" + std::to_string(n),
                     "the level-" + std::to_string(n) +
                         " fiber has its closed-form vertex, edge, and component counts",
                     shape_string(fg.vertices(), fg.edges(), fg.ncomp, h1(fg.graph)),
                     shape_string(want.v, want.e, want.comps, want.h1));
        if (n >= 2) {
            std::string offender;
            for (int c = 0; c < fg.ncomp && offender.empty(); ++c)
                if (!component_is_complete_bipartite(fg, c, q))
                    offender = "component " + std::to_string(c);
            check_true(rep, "fiber-bipartite-n" + std::to_string(n),
                       "every component of the level-" + std::to_string(n) +
                           " fiber is a complete bipartite graph on q + q cells",
                       offender.empty(),
                       offender.empty() ? std::to_string(fg.ncomp) + " components" : offender);
        }
    }
}

// ----- stage: cohomology -----
inline void stage_cohomology(Report& rep, const RunConfig& cfg, RunContext& ctx) {
    const std::int64_t q = rep.q;
    for (int n = 0; n <= cfg.n_max; ++n) {
        const FiberGraph& fg = ctx.fiber_at(n);
        const FiberShape want = expected_fiber_shape(n, q);
        // h_dims_checked wires the exact-rank cross-check internally
        const HDims hd = h_dims_checked(fg.graph);
        check_eq(rep, "cohomology-h1-n" + std::to_string(n),
                 "dim H^1 of the level-" + std::to_string(n) +
                     " fiber matches the closed form (Euler count and exact rank agree)",
                 hd.h1, want.h1);
        if (n >= 2) {
            Graph comp0 = component_subgraph(fg.graph, fg.comp, 0);
            check_eq(rep, "cohomology-harmonic-n" + std::to_string(n),
                     "the harmonic-cochain space of one component has dimension (q-1)^2",
                     harmonic_dim_exact(comp0), (q - 1) * (q - 1));
        }
    }
}

// ----- stage: characters -----
inline void stage_characters(Report& rep, const RunConfig& cfg, RunContext& ctx) {
    const TruncatedTree& t = *ctx.tree;
    const GaloisRing& W = t.ring();
    GaloisRing F(cfg.p, cfg.f, 1);
    const std::int64_t q = rep.q;

    FiniteGroup<PglMat> G(pgl_ops(F), pgl_reduce_generators(F, gens_K(W)));
    check_eq(rep, "characters-group-order", "the residue quotient group has order q^3 - q",
             G.order(), q * q * q - q);

    PglCharTable table(F);
    {
        std::string offender;
        for (int i = 0; i < table.count() && offender.empty(); ++i)
            for (int j = i; j < table.count() && offender.empty(); ++j) {
                const cx ip =
                    inner_product(G, table.as_class_function(i, G), table.as_class_function(j, G));
                if (std::abs(ip - cx(i == j ? 1.0 : 0.0)) > 1e-9)
                    offender = "<" + table.label(i) + ", " + table.label(j) + "> = " +
                               std::to_string(ip.real());
            }
        check_true(rep, "characters-table-orthonormal",
                   "the irreducible character table rows are orthonormal", offender.empty(),
                   offender.empty() ? std::to_string(table.count()) + " rows" : offender);
        std::int64_t dimsq = 0;
        for (int i = 0; i < table.count(); ++i) dimsq += (std::int64_t)table.dim(i) * table.dim(i);
        check_eq(rep, "characters-table-complete",
                 "the squared irreducible dimensions sum to the group order", dimsq,
                 q * q * q - q);
    }

    {
        const GgReport gg = gelfand_graev_check(t);
        check_true(rep, "characters-whittaker-identity",
                   "the level-one cochain characters satisfy C1 = Ind(psi) + 1 + St and "
                   "C0 = 2(1 + St), and Ind(psi) is multiplicity free",
                   gg.pass, gg.pass ? "identities hold" : gg.detail);
        check_eq(rep, "characters-whittaker-dimension",
                 "dim H^1 of the level-one fiber equals q^2 - q - 1", gg.dim_h1, q * q - q - 1);
        std::string inv;
        for (const auto& [label, mult] : gg.h1_constituents)
            inv += (inv.empty() ? "" : " ") + label + ":" + std::to_string(mult);
        check_true(rep, "characters-h1-inventory",
                   "H^1 of the level-one fiber decomposes multiplicity-free into the twisted "
                   "Steinberg, principal-series, and cuspidal constituents",
                   gg.pass, inv);
    }

    {
        GaloisRing L1(cfg.p, cfg.f, 1);
        const FiberGraph& f0 = ctx.fiber_at(0);
        auto fa = build_tilde_fiber_action(t, f0, L1, gens_Itilde(W));
        std::string offender;
        for (int c = 0; c < fa.G.class_count() && offender.empty(); ++c)
            if (std::abs(fa.h1.v[c] - cx(1.0)) > 1e-9)
                offender = "class " + std::to_string(c) + " value " +
                           std::to_string(fa.h1.v[c].real());
        check_true(rep, "characters-level0-trivial",
                   "H^1 of the level-zero fiber is the trivial character of the edge-stabilizer "
                   "quotient, of dimension one",
                   offender.empty(), offender.empty() ? "all class values 1" : offender);
    }

    // principal-series norms at conductors supported by the tower height
    if (cfg.f == 1)
        for (int c = 1; c <= std::min(2, (cfg.n_max + 1) / 2); ++c) {
            GaloisRing level(cfg.p, 1, c);
            FiniteGroup<PglMat> Gbar(pgl_ops(level), pgl_reduce_generators(level, gens_K(W)));
            const std::int64_t phi = level.pk() - level.pk() / level.p();
            int admissible = 0, excluded = 0;
            std::string offender;
            for (std::int64_t j = 1; j < phi && offender.empty(); ++j) {
                const PsReport ps = principal_series_type_check(Gbar, level, j);
                if (ps.hypothesis_ok && ps.conductor_ok) {
                    ++admissible;
                    if (ps.norm != 1.0)
                        offender = "character " + std::to_string(j) + " has norm " +
                                   std::to_string(ps.norm);
                } else {
                    ++excluded;
                }
            }
            check_true(rep, "characters-ps-norm-c" + std::to_string(c),
                       "every admissible depth-" + std::to_string(c) +
                           " torus character induces irreducibly to the vertex quotient "
                           "(Mackey norm one)",
                       offender.empty(),
                       offender.empty() ? std::to_string(admissible) + " admissible, " +
                                              std::to_string(excluded) + " excluded"
                                        : offender);
        }
}

// ----- stage: types ledger -----
inline void stage_ledger(Report& rep, const RunConfig& cfg, RunContext& ctx) {
    TypesLedger led;
    try {
        led = types_ledger(*ctx.tree, cfg.n_max);
    } catch (const std::exception& ex) {
        add_check(rep, "ledger-build",
                  "every H^1 constituent up to n_max is classified into the trichotomy", false,
                  ex.what(), "complete classification");
        return;
    }
    add_check(rep, "ledger-build",
              "every H^1 constituent up to n_max is classified into the trichotomy", true,
              std::to_string(led.entries.size()) + " entries", "complete classification");

    {
        std::string offender;
        for (const auto& [lvl, dim] : led.h1_dims) {
            std::int64_t covered = 0;
            for (const TypeLedgerEntry& e : led.entries) {
                auto it = e.per_level.find(lvl);
                if (it != e.per_level.end()) covered += (std::int64_t)it->second * e.dim;
            }
            if (covered != dim && offender.empty())
                offender = "level " + std::to_string(lvl) + " covers " +
                           std::to_string(covered) + " of " + std::to_string(dim);
        }
        check_true(rep, "ledger-conservation",
                   "per level, constituent dimensions times multiplicities sum to dim H^1",
                   offender.empty(), offender.empty() ? "all levels conserved" : offender);
    }

    {
        int cuspidal = 0;
        std::string offender;
        for (const TypeLedgerEntry& e : led.entries) {
            if (e.kind != "level0-cuspidal" && e.kind != "cuspidal-type") continue;
            ++cuspidal;
            if (e.total() != 1 && offender.empty())
                offender = e.label + " has total multiplicity " + std::to_string(e.total());
        }
        check_true(rep, "ledger-cuspidal-multiplicity",
                   "every cuspidal-kind constituent appears with total multiplicity exactly one",
                   offender.empty(),
                   offender.empty() ? std::to_string(cuspidal) + " cuspidal entries, all total 1"
                                    : offender);
    }

    rep.ledger = std::move(led);
}

}  // namespace detail

// Executes the configured suites in the fixed order and returns the report.
// Throws ConfigError for unusable configurations.
inline Report run(const RunConfig& cfg) {
    Report rep;
    rep.config = cfg;
    validate_config(cfg, rep);

    detail::RunContext ctx;
    ctx.tree.emplace(GaloisRing(cfg.p, cfg.f, rep.radius_used + 2), rep.radius_used);

    if (cfg.suites.count("combinatorics")) {
        detail::stage_ring(rep, cfg);
        detail::stage_tree(rep, ctx);
        detail::stage_fibers(rep, cfg, ctx);
    }
    if (cfg.suites.count("cohomology")) detail::stage_cohomology(rep, cfg, ctx);
    if (cfg.suites.count("characters")) detail::stage_characters(rep, cfg, ctx);
    if (cfg.suites.count("ledger")) detail::stage_ledger(rep, cfg, ctx);
    return rep;
}

}  // namespace treecoh
