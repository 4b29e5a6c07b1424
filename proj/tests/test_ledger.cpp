#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "treecoh/ledger.hpp"

using namespace treecoh;

namespace {
TruncatedTree make_tree(std::int64_t p, int f, int radius) {
    return TruncatedTree(GaloisRing(p, f, radius + 2), radius);
}

std::map<int, int> covered_dims(const TypesLedger& led) {
    std::map<int, int> out;
    for (const TypeLedgerEntry& e : led.entries)
        for (const auto& [lvl, m] : e.per_level) out[lvl] += m * e.dim;
    return out;
}
}  // namespace

TEST_CASE("full ledger at p = 3 up to level three") {
    auto t = make_tree(3, 1, 3);
    TypesLedger led = types_ledger(t, 3);
    CHECK(led.p == 3);
    CHECK(led.f == 1);
    CHECK(led.q == 3);
    CHECK(led.n_max == 3);
    CHECK(led.h1_dims == std::map<int, int>{{0, 1}, {1, 5}, {2, 8}, {3, 48}});

    // the complete expected classification, in export order
    const std::vector<std::tuple<std::string, std::string, int>> expected = {
        {"l3-cusp-d2-x0", "cuspidal-type", 6},
        {"l3-cusp-d2-x1", "cuspidal-type", 6},
        {"l3-cusp-d2-x2", "cuspidal-type", 6},
        {"l3-cusp-d2-x3", "cuspidal-type", 6},
        {"l1-cusp_1", "level0-cuspidal", 2},
        {"l3-ps-d1-x0", "principal-series-type", 12},
        {"l3-ps-d1-x1", "principal-series-type", 12},
        {"l2-ram-b11-x0", "ramified-type", 2},
        {"l2-ram-b11-x1", "ramified-type", 2},
        {"l2-ram-b12-x0", "ramified-type", 2},
        {"l2-ram-b12-x1", "ramified-type", 2},
        {"l0-trivial", "trivial-iwahori", 1},
        {"l1-st_sgn", "twisted-steinberg", 3},
    };
    REQUIRE(led.entries.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CAPTURE(i);
        CHECK(led.entries[i].label == std::get<0>(expected[i]));
        CHECK(led.entries[i].kind == std::get<1>(expected[i]));
        CHECK(led.entries[i].dim == std::get<2>(expected[i]));
        CHECK(led.entries[i].total() == 1);
    }

    // conservation: the classified pieces exhaust every cohomology space
    CHECK(covered_dims(led) == led.h1_dims);

    // cuspidal kinds each appear exactly once over all levels
    for (const TypeLedgerEntry& e : led.entries)
        if (e.kind == "cuspidal-type" || e.kind == "level0-cuspidal") CHECK(e.total() == 1);
}

TEST_CASE("ledger truncation to level one") {
    auto t = make_tree(3, 1, 2);
    TypesLedger led = types_ledger(t, 1);
    REQUIRE(led.entries.size() == 3);
    CHECK(led.entries[0].label == "l1-cusp_1");
    CHECK(led.entries[1].label == "l0-trivial");
    CHECK(led.entries[2].label == "l1-st_sgn");
    CHECK(led.h1_dims == std::map<int, int>{{0, 1}, {1, 5}});
}

TEST_CASE("ledger export formats") {
    auto t = make_tree(3, 1, 3);
    TypesLedger led = types_ledger(t, 3);

    const std::string js = ledger_to_json(led);
    CHECK(js == ledger_to_json(led));  // deterministic
    auto parsed = nlohmann::json::parse(js);
    CHECK(parsed["p"] == 3);
    CHECK(parsed["q"] == 3);
    CHECK(parsed["n_max"] == 3);
    REQUIRE(parsed["entries"].size() == 13);
    CHECK(parsed["entries"][0]["label"] == "l3-cusp-d2-x0");
    CHECK(parsed["entries"][0]["kind"] == "cuspidal-type");
    CHECK(parsed["entries"][0]["dim"] == 6);
    CHECK(parsed["entries"][0]["per_level"] == nlohmann::json({{"3", 1}}));
    CHECK(parsed["entries"][0]["total"] == 1);
    CHECK(parsed["entries"][12]["label"] == "l1-st_sgn");

    CHECK(ledger_to_csv(led) ==
          "level,label,kind,dim,multiplicity\n"
          "0,l0-trivial,trivial-iwahori,1,1\n"
          "1,l1-cusp_1,level0-cuspidal,2,1\n"
          "1,l1-st_sgn,twisted-steinberg,3,1\n"
          "2,l2-ram-b11-x0,ramified-type,2,1\n"
          "2,l2-ram-b11-x1,ramified-type,2,1\n"
          "2,l2-ram-b12-x0,ramified-type,2,1\n"
          "2,l2-ram-b12-x1,ramified-type,2,1\n"
          "3,l3-cusp-d2-x0,cuspidal-type,6,1\n"
          "3,l3-cusp-d2-x1,cuspidal-type,6,1\n"
          "3,l3-cusp-d2-x2,cuspidal-type,6,1\n"
          "3,l3-cusp-d2-x3,cuspidal-type,6,1\n"
          "3,l3-ps-d1-x0,principal-series-type,12,1\n"
          "3,l3-ps-d1-x1,principal-series-type,12,1\n");
}

TEST_CASE("ledger conservation at p = 5") {
    auto t = make_tree(5, 1, 3);
    TypesLedger led = types_ledger(t, 3);
    CHECK(led.h1_dims == std::map<int, int>{{0, 1}, {1, 19}, {2, 32}, {3, 480}});
    CHECK(covered_dims(led) == led.h1_dims);
    for (const TypeLedgerEntry& e : led.entries)
        if (e.kind == "cuspidal-type" || e.kind == "level0-cuspidal") CHECK(e.total() == 1);
    // level-one content over F_5 includes a principal series constituent
    bool ps1 = false;
    for (const TypeLedgerEntry& e : led.entries) ps1 |= (e.label == "l1-ps_1");
    CHECK(ps1);
}
