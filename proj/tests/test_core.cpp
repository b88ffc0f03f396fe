#include <catch2/catch_amalgamated.hpp>

#include "cbm/core.hpp"
#include "fixtures.hpp"

using namespace cbm;
using fixtures::bid;
using fixtures::cid;

TEST_CASE("empty allocation is feasible") {
    const auto econ = fixtures::example1_economy();
    CHECK(validate_allocation(econ, Allocation{}).ok);
}

TEST_CASE("worked-example allocation is feasible") {
    const auto econ = fixtures::example1_economy();
    const auto report = validate_allocation(econ, fixtures::example1_expected(econ));
    CHECK(report.ok);
}

TEST_CASE("lowering the increased-cost cap breaks condition 3") {
    auto econ = fixtures::example1_economy().with_quotas({BranchQuota{6, 1}});
    const auto report = validate_allocation(econ, fixtures::example1_expected(econ));
    REQUIRE_FALSE(report.ok);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].condition == 3);
    CHECK(report.violations[0].branch == bid(econ, "b"));
    CHECK(report.violations[0].count == 2);
    CHECK(report.violations[0].limit == 1);
}

TEST_CASE("unknown ids are resolution errors, not violations") {
    const auto econ = fixtures::example1_economy();
    const auto bad =
        Allocation::from_contracts({{CadetId{42}, BranchId{0}, Cost::Base}});
    CHECK_THROWS_AS(validate_allocation(econ, bad), Error);
}

TEST_CASE("validate_allocation matches direct counting on random contract sets") {
    Rng rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = rng.uniform_int(1, 8);
        const int m = rng.uniform_int(1, 3);
        auto econ = fixtures::random_economy(rng, n, m, 4);
        std::vector<Contract> contracts;
        const int count = rng.uniform_int(0, 10);
        for (int k = 0; k < count; ++k)
            contracts.push_back({CadetId{rng.uniform_int(0, n - 1)},
                                 BranchId{rng.uniform_int(0, m - 1)},
                                 rng.uniform_int(0, 1) ? Cost::Increased : Cost::Base});
        const auto report = validate_allocation(econ, Allocation::from_contracts(contracts));
        bool expect_ok = true;
        for (int i = 0; i < n; ++i) {
            int c = 0;
            for (const auto& x : contracts)
                if (x.cadet.v == i) ++c;
            if (c > 1) expect_ok = false;
        }
        for (int b = 0; b < m; ++b) {
            int all = 0, inc = 0;
            for (const auto& x : contracts)
                if (x.branch.v == b) {
                    ++all;
                    if (x.cost == Cost::Increased) ++inc;
                }
            if (all > econ.quota(BranchId{b}).total) expect_ok = false;
            if (inc > econ.quota(BranchId{b}).bradso_cap) expect_ok = false;
        }
        CHECK(report.ok == expect_ok);
    }
}

TEST_CASE("base cost beats increased cost at the same branch") {
    const auto econ = fixtures::example1_economy();
    const auto prefs = fixtures::example1_preferences(econ);
    const BranchId b{0};
    const CadetId i1 = cid(econ, "i1");
    CHECK(compare_assignments(prefs[i1.v], Assignment{b, Cost::Base},
                              Assignment{b, Cost::Increased}) == Ordering::FirstPreferred);
}

TEST_CASE("a cadet who finds the increased cost unacceptable prefers unmatched") {
    const auto econ = fixtures::example1_economy();
    const auto prefs = fixtures::example1_preferences(econ);
    const CadetId i2 = cid(econ, "i2");
    CHECK(compare_assignments(prefs[i2.v], std::nullopt,
                              Assignment{BranchId{0}, Cost::Increased}) ==
          Ordering::FirstPreferred);
}

TEST_CASE("identical assignments compare equal") {
    const auto econ = fixtures::example1_economy();
    const auto prefs = fixtures::example1_preferences(econ);
    const MaybeAssignment a = Assignment{BranchId{0}, Cost::Base};
    CHECK(compare_assignments(prefs[0], a, a) == Ordering::Equal);
    CHECK(compare_assignments(prefs[0], std::nullopt, std::nullopt) == Ordering::Equal);
}

TEST_CASE("pairs absent from the preference are unacceptable, never an error") {
    const auto p = ContractPreference::make(CadetId{0}, {{BranchId{0}, Cost::Base}});
    CHECK(compare_assignments(p, std::nullopt, Assignment{BranchId{7}, Cost::Base}) ==
          Ordering::FirstPreferred);
    CHECK(compare_assignments(p, Assignment{BranchId{7}, Cost::Base},
                              Assignment{BranchId{9}, Cost::Increased}) == Ordering::Equal);
}

TEST_CASE("preference construction rejects increased above base") {
    CHECK_THROWS_AS(ContractPreference::make(
                        CadetId{0}, {{BranchId{0}, Cost::Increased}, {BranchId{0}, Cost::Base}}),
                    Error);
    // Increased acceptable but base only in the unacceptable tail is also out
    // of the domain.
    CHECK_THROWS_AS(ContractPreference::make(CadetId{0}, {{BranchId{0}, Cost::Increased}},
                                             {{BranchId{0}, Cost::Base}}),
                    Error);
    CHECK_THROWS_AS(
        ContractPreference::make(CadetId{0}, {{BranchId{0}, Cost::Base}, {BranchId{0}, Cost::Base}}),
        Error);
}

TEST_CASE("unacceptable tail keeps its listed order below unmatched") {
    const auto p = ContractPreference::make(
        CadetId{0}, {{BranchId{0}, Cost::Base}},
        {{BranchId{1}, Cost::Base}, {BranchId{0}, Cost::Increased}});
    CHECK(p.prefers(std::nullopt, Assignment{BranchId{1}, Cost::Base}));
    CHECK(p.prefers(Assignment{BranchId{1}, Cost::Base}, Assignment{BranchId{0}, Cost::Increased}));
}

TEST_CASE("quasi-strategy rejects duplicates but allows unranked willingness") {
    CHECK_THROWS_AS(QuasiStrategy::make(CadetId{0}, {BranchId{0}, BranchId{0}}, {}), Error);
    const auto s = QuasiStrategy::make(CadetId{0}, {BranchId{0}}, {BranchId{1}});
    CHECK(s.willing(BranchId{1}));
    CHECK_FALSE(s.ranks(BranchId{1}));
}

TEST_CASE("economy validation") {
    std::vector<CadetId> order{CadetId{0}};
    auto pi = BaselinePriority::from_order(BranchId{0}, order);
    CHECK_THROWS_AS(Economy::make({"c"}, {"b"}, {BranchQuota{1, 2}}, {pi}, {ultimate_policy(pi)}),
                    Error);
    CHECK_THROWS_AS(Economy::make({"c"}, {"b"}, {BranchQuota{0, 0}}, {pi}, {ultimate_policy(pi)}),
                    Error);
}

TEST_CASE("allocation table lookup") {
    const auto econ = fixtures::example1_economy();
    const auto alloc = fixtures::example1_expected(econ);
    const auto table = alloc.table(econ.num_cadets());
    CHECK(table[cid(econ, "i1").v] == MaybeAssignment(Assignment{BranchId{0}, Cost::Increased}));
    CHECK(table[cid(econ, "i2").v] == std::nullopt);
    CHECK(alloc.assignment_of(cid(econ, "i4")) ==
          MaybeAssignment(Assignment{BranchId{0}, Cost::Base}));
}
