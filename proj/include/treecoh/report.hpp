// Run configuration and check reports for the experiment driver.
//
// A Report is a flat list of check records.  Each record carries a stable
// machine id, a self-contained statement of the claim being verified, the
// observed and expected values, and a pass flag; a failing record's observed
// string names the first offending object so the failure can be reproduced.
// Serialization is deterministic: JSON objects are std::map-backed (keys
// come out sorted), CSV rows are emitted in sorted order, so two runs with
// the same configuration produce byte-identical output.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "treecoh/ledger.hpp"

namespace treecoh {

struct RunConfig {
    std::int64_t p = 3;
    int f = 1;
    int n_max = 1;
    // Tree ball radius; 0 means "smallest radius that supports n_max".
    int radius = 0;
    std::set<std::string> suites = {"combinatorics", "cohomology", "characters", "ledger"};
    std::string format = "json";  // json | csv
    std::string out = "-";        // "-" = stdout
};

struct CheckRecord {
    std::string id;     // stable machine id, e.g. "cohomology-h1-n2"
    std::string claim;  // self-contained statement of what is verified
    bool pass = false;
    std::string observed;
    std::string expected;
};

struct Report {
    RunConfig config;
    std::int64_t q = 0;
    int radius_used = 0;
    std::vector<std::string> warnings;
    std::vector<CheckRecord> checks;
    std::optional<TypesLedger> ledger;

    int failed() const {
        int n = 0;
        for (const CheckRecord& c : checks)
            if (!c.pass) ++n;
        return n;
    }
    bool all_pass() const { return failed() == 0; }
};

// ----- recording helpers -----

inline void add_check(Report& rep, std::string id, std::string claim, bool pass,
                      std::string observed, std::string expected) {
    rep.checks.push_back(
        {std::move(id), std::move(claim), pass, std::move(observed), std::move(expected)});
}

inline void check_eq(Report& rep, std::string id, std::string claim, std::int64_t observed,
                     std::int64_t expected) {
    add_check(rep, std::move(id), std::move(claim), observed == expected,
              std::to_string(observed), std::to_string(expected));
}

inline void check_eq_str(Report& rep, std::string id, std::string claim, std::string observed,
                         std::string expected) {
    const bool ok = observed == expected;
    add_check(rep, std::move(id), std::move(claim), ok, std::move(observed),
              std::move(expected));
}

inline void check_true(Report& rep, std::string id, std::string claim, bool pass,
                       std::string observed) {
    add_check(rep, std::move(id), std::move(claim), pass, std::move(observed), "satisfied");
}

// ----- serialization -----

inline nlohmann::json report_json_value(const Report& rep) {
    nlohmann::json out;
    out["p"] = rep.config.p;
    out["f"] = rep.config.f;
    out["q"] = rep.q;
    out["n_max"] = rep.config.n_max;
    nlohmann::json cfg;
    cfg["p"] = rep.config.p;
    cfg["f"] = rep.config.f;
    cfg["n_max"] = rep.config.n_max;
    cfg["radius"] = rep.config.radius;
    cfg["radius_used"] = rep.radius_used;
    cfg["suites"] = std::vector<std::string>(rep.config.suites.begin(), rep.config.suites.end());
    cfg["format"] = rep.config.format;
    cfg["out"] = rep.config.out;
    out["config"] = cfg;
    out["warnings"] = rep.warnings;
    out["checks"] = nlohmann::json::array();
    for (const CheckRecord& c : rep.checks) {
        nlohmann::json jc;
        jc["id"] = c.id;
        jc["claim"] = c.claim;
        jc["status"] = c.pass ? "pass" : "fail";
        jc["observed"] = c.observed;
        jc["expected"] = c.expected;
        out["checks"].push_back(jc);
    }
    nlohmann::json sum;
    sum["checks"] = (int)rep.checks.size();
    sum["failed"] = rep.failed();
    sum["passed"] = (int)rep.checks.size() - rep.failed();
    out["summary"] = sum;
    // the types-ledger block uses the ledger export schema verbatim
    out["entries"] =
        rep.ledger ? ledger_json_value(*rep.ledger)["entries"] : nlohmann::json::array();
    return out;
}

inline std::string report_to_json(const Report& rep) {
    return report_json_value(rep).dump(2) + "\n";
}

// CSV flattening carries the types ledger (header only when no ledger ran).
inline std::string report_to_csv(const Report& rep) {
    if (rep.ledger) return ledger_to_csv(*rep.ledger);
    return "level,label,kind,dim,multiplicity\n";
}

// Human-readable check lines, one per record, plus a summary.
inline std::string report_to_text(const Report& rep) {
    std::ostringstream os;
    for (const std::string& w : rep.warnings) os << "warning: " << w << "\n";
    for (const CheckRecord& c : rep.checks) {
        os << (c.pass ? "pass " : "FAIL ") << c.id << ": " << c.claim << " [observed "
           << c.observed << ", expected " << c.expected << "]\n";
    }
    os << (rep.all_pass() ? "OK" : "FAILED") << " — " << rep.checks.size() - rep.failed()
       << "/" << rep.checks.size() << " checks passed (p=" << rep.config.p
       << ", f=" << rep.config.f << ", q=" << rep.q << ", n_max=" << rep.config.n_max
       << ", radius=" << rep.radius_used << ")\n";
    return os.str();
}

}  // namespace treecoh
