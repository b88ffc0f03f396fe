#include <catch2/catch_amalgamated.hpp>

#include "cbm/analysis.hpp"
#include "fixtures.hpp"

using namespace cbm;
using fixtures::cid;

TEST_CASE("truthful projection") {
    SECTION("base-only preference has an empty willingness set") {
        const auto p = ContractPreference::make(CadetId{0}, {{BranchId{0}, Cost::Base}});
        const auto s = project_truthful({p});
        CHECK(s[0].branch_order() == std::vector<BranchId>{BranchId{0}});
        CHECK(s[0].bradso_set().empty());
    }

    SECTION("an increased-cost entry ranked below another branch still projects") {
        // AV > IN > AV-with-BRADSO > unmatched.
        const BranchId av{0}, in{1};
        const auto p = ContractPreference::make(
            CadetId{0}, {{av, Cost::Base}, {in, Cost::Base}, {av, Cost::Increased}});
        const auto s = project_truthful({p});
        CHECK(s[0].branch_order() == std::vector<BranchId>{av, in});
        CHECK(s[0].bradso_set() == std::vector<BranchId>{av});
    }

    SECTION("worked-example volunteer projects to a willing singleton") {
        const auto econ = fixtures::example1_economy();
        const auto s = project_truthful(fixtures::example1_preferences(econ));
        const auto i1 = cid(econ, "i1");
        CHECK(s[i1.v].branch_order() == std::vector<BranchId>{BranchId{0}});
        CHECK(s[i1.v].bradso_set() == std::vector<BranchId>{BranchId{0}});
        const auto i2 = cid(econ, "i2");
        CHECK(s[i2.v].bradso_set().empty());
    }
}

TEST_CASE("metrics under a direct mechanism mark counterfactuals unavailable") {
    const auto econ = fixtures::example1_economy();
    const auto prefs = fixtures::example1_preferences(econ);
    const auto result = simulate_regime(econ, prefs, Regime::COMBRADSO);
    CHECK(result.allocation == fixtures::example1_expected(econ));
    CHECK_FALSE(result.metrics.strategic_bradso().has_value());
    CHECK_FALSE(result.metrics.bradso_ic_failures().has_value());
    REQUIRE(result.metrics.priority_reversals().has_value());
    CHECK(*result.metrics.priority_reversals() == 0);
    REQUIRE(result.metrics.detectable_priority_reversals().has_value());
    CHECK(*result.metrics.detectable_priority_reversals() == 0);
    CHECK(result.metrics.bradso_charged_total == 2);
}

TEST_CASE("usma2020 on the truthful projection shows both pathologies") {
    const auto econ = fixtures::example1_economy();
    const auto prefs = fixtures::example1_preferences(econ);
    const auto result = simulate_regime(econ, prefs, Regime::USMA2020);
    REQUIRE(result.metrics.bradso_ic_failures().has_value());
    CHECK(*result.metrics.bradso_ic_failures() >= 1);
    bool ic_i3 = false;
    for (const auto& w : result.metrics.bradso_ic_report->witnesses)
        if (w.cadets == std::vector<CadetId>{cid(econ, "i3")}) ic_i3 = true;
    CHECK(ic_i3);

    REQUIRE(result.metrics.strategic_bradso().has_value());
    CHECK(*result.metrics.strategic_bradso() >= 1);
    bool gratuitous_i5 = false;
    for (const auto& w : result.metrics.strategic_bradso_report->witnesses)
        if (w.cadets == std::vector<CadetId>{cid(econ, "i5")}) gratuitous_i5 = true;
    CHECK(gratuitous_i5);
}

TEST_CASE("usma2006 with no volunteers has all-zero metrics") {
    Rng rng(21);
    auto econ = fixtures::random_merit_economy(rng, 6, 2, 3);
    std::vector<ContractPreference> prefs;
    for (int i = 0; i < econ.num_cadets(); ++i)
        prefs.push_back(fixtures::random_preference(rng, econ, CadetId{i}, 0.0));
    const auto result = simulate_regime(econ, prefs, Regime::USMA2006);
    CHECK(*result.metrics.strategic_bradso() == 0);
    CHECK(*result.metrics.bradso_ic_failures() == 0);
    CHECK(*result.metrics.detectable_priority_reversals() == 0);
    CHECK(*result.metrics.priority_reversals() == 0);
    CHECK(result.metrics.bradso_charged_total == 0);
    // Branch-wise it is the serial dictatorship outcome.
    std::vector<std::vector<BranchId>> orders;
    for (const auto& p : prefs) {
        std::vector<BranchId> o;
        for (const auto& [b, t] : p.acceptable())
            if (t == Cost::Base) o.push_back(b);
        orders.push_back(o);
    }
    CHECK(result.allocation == serial_dictatorship(econ, orders));
}

TEST_CASE("detectable reversals are a subset of full reversals under truthful projection") {
    Rng rng(777);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = rng.uniform_int(2, 7);
        const int m = rng.uniform_int(1, 3);
        auto econ = fixtures::random_economy(rng, n, m, 4);
        const auto prefs = fixtures::random_preferences(rng, econ, 0.6);
        const auto strategies = project_truthful(prefs);
        // Both mechanism outcomes and random individually rational
        // allocations; assignments a cadet never ranked are outside the
        // comparison's domain.
        std::vector<Allocation> allocs{usma2020(econ, strategies).first,
                                       com_bradso(econ, prefs).first};
        {
            std::vector<Contract> contracts;
            std::vector<int> used(m, 0), inc(m, 0);
            for (int i = 0; i < n; ++i) {
                if (prefs[i].acceptable().empty() || rng.uniform01() < 0.4) continue;
                const auto pick = rng.uniform_int(
                    0, static_cast<int>(prefs[i].acceptable().size()) - 1);
                const auto [b, t] = prefs[i].acceptable()[pick];
                const bool increased = t == Cost::Increased;
                if (used[b.v] >= econ.quota(b).total) continue;
                if (increased && inc[b.v] >= econ.quota(b).bradso_cap) continue;
                ++used[b.v];
                if (increased) ++inc[b.v];
                contracts.push_back({CadetId{i}, b, t});
            }
            allocs.push_back(Allocation::from_contracts(contracts));
        }
        for (const auto& alloc : allocs) {
            const auto detectable = check_detectable_priority_reversals(econ, strategies, alloc);
            const auto full = check_priority_reversals(econ, prefs, alloc);
            for (const auto& w : detectable.witnesses) {
                bool found = false;
                for (const auto& f : full.witnesses)
                    if (f.cadets == w.cadets && f.branch == w.branch) found = true;
                CHECK(found);
            }
        }
    }
}

TEST_CASE("choice-rule monotonicity on the worked-example pool") {
    const auto econ = fixtures::example1_economy();
    const BranchId b{0};
    std::vector<Contract> pool;
    for (int i = 0; i < econ.num_cadets(); ++i) pool.push_back({CadetId{i}, b, Cost::Base});
    for (const auto& name : {"i1", "i3", "i5", "j1"})
        pool.push_back({cid(econ, name), b, Cost::Increased});
    const auto verdict = bradso_monotonicity_check(
        6, econ.priority(b), pool, {0, 1, 2, 3, 4, 5, 6}, {econ.policy(b)});
    CHECK(verdict.holds);
    CHECK(verdict.counts[0] == std::vector<int>{0, 1, 2, 3, 3, 4, 4});
}

TEST_CASE("choice-rule monotonicity along the policy chain") {
    const auto econ = fixtures::example1_economy();
    const BranchId b{0};
    const auto& pi = econ.priority(b);
    const auto tiers =
        TierAssignment::make(pi, {0, 0, 0, 1, 1, 1, 2, 2});  // three tiers down the priority
    std::vector<Contract> pool = fixtures::random_viable_pool(*[] {
        static Rng rng(4242);
        return &rng;
    }(), econ.num_cadets(), b);
    const std::vector<BradsoPolicy> chain{
        tiered_policy(pi, tiers, TieredVariant::Tier2020),
        tiered_policy(pi, tiers, TieredVariant::Tier2021), ultimate_policy(pi)};
    const auto verdict = bradso_monotonicity_check(6, pi, pool, {0, 1, 2, 3, 4, 5, 6}, chain);
    CHECK(verdict.holds);
}

TEST_CASE("monotonicity checker validates its inputs") {
    const auto econ = fixtures::example1_economy();
    const BranchId b{0};
    std::vector<Contract> pool{{CadetId{0}, b, Cost::Base}};
    CHECK_THROWS_AS(
        bradso_monotonicity_check(6, econ.priority(b), pool, {3, 1}, {econ.policy(b)}), Error);
    const auto& pi = econ.priority(b);
    const auto tiers = TierAssignment::make(pi, {0, 0, 0, 0, 1, 1, 1, 1});
    CHECK_THROWS_AS(bradso_monotonicity_check(
                        6, pi, pool, {0, 1},
                        {ultimate_policy(pi), tiered_policy(pi, tiers, TieredVariant::Tier2020)}),
                    Error);
}

TEST_CASE("a pool without increased contracts never charges anyone") {
    const auto econ = fixtures::example1_economy();
    const BranchId b{0};
    std::vector<Contract> pool;
    for (int i = 0; i < econ.num_cadets(); ++i) pool.push_back({CadetId{i}, b, Cost::Base});
    const auto verdict = bradso_monotonicity_check(6, econ.priority(b), pool, {0, 2, 4, 6},
                                                   {econ.policy(b)});
    CHECK(verdict.holds);
    for (int c : verdict.counts[0]) CHECK(c == 0);
}

TEST_CASE("sweep over the worked example matches the direct mechanism's charges") {
    const auto econ = fixtures::example1_economy();
    const auto prefs = fixtures::example1_preferences(econ);
    SweepGrid grid;
    grid.cap_fractions = {0.0, 1.0 / 6, 2.0 / 6, 3.0 / 6, 4.0 / 6, 5.0 / 6, 1.0};
    grid.policies = {{PolicyVariant::Ultimate, {}}};
    const auto result = sweep(econ, prefs, grid);
    // 8 branch rows + aggregate rows interleaved: single branch means two
    // rows per cell.
    REQUIRE(result.rows.size() == grid.cap_fractions.size() * 2);
    std::vector<int> totals;
    for (const auto& row : result.rows)
        if (!row.branch) totals.push_back(row.bradso_charged);
    CHECK(totals == std::vector<int>{0, 1, 2, 2, 2, 2, 2});
    // Oracle: the direct single-branch mechanism at the matching cap.
    for (std::size_t k = 0; k < grid.cap_fractions.size(); ++k) {
        const int cap = static_cast<int>(grid.cap_fractions[k] * 6);
        const auto direct = single_branch_bradso(
            econ.with_quotas({BranchQuota{6, cap}}), prefs);
        CHECK(totals[k] == count_increased(direct.contracts()));
    }
}

TEST_CASE("sweep honours tier assignments and rejects missing ones") {
    Rng rng(31337);
    std::vector<TierAssignment> tiers;
    auto econ = fixtures::random_economy(rng, 10, 2, 5, &tiers);
    const auto prefs = fixtures::random_preferences(rng, econ, 0.5);
    SweepGrid grid;
    grid.cap_fractions = {0.25, 0.75};
    grid.policies = {{PolicyVariant::Tier2020, {}},
                     {PolicyVariant::Tier2021, {}},
                     {PolicyVariant::Ultimate, {}}};
    CHECK_THROWS_AS(sweep(econ, prefs, grid), Error);
    const auto result = sweep(econ, prefs, grid, tiers);
    CHECK(result.rows.size() == 2 * 3 * 3);  // two caps, three policies, 2 branches + ALL
    // Rows come out in grid order.
    CHECK(result.rows[0].cap_fraction == 0.25);
    CHECK(result.rows[0].policy == "tier2020");
    CHECK(result.rows.back().cap_fraction == 0.75);
    CHECK(result.rows.back().policy == "ultimate");
    CHECK_FALSE(result.rows.back().branch.has_value());
}

TEST_CASE("per-branch charges rise weakly with the cap fraction") {
    Rng rng(90210);
    std::vector<TierAssignment> tiers;
    auto econ = fixtures::random_economy(rng, 12, 3, 5, &tiers);
    const auto prefs = fixtures::random_preferences(rng, econ, 0.6);
    SweepGrid grid;
    grid.cap_fractions = {0.0, 0.25, 0.5, 0.75, 1.0};
    grid.policies = {{PolicyVariant::Ultimate, {}}, {PolicyVariant::Tier2021, {}}};
    const auto result = sweep(econ, prefs, grid, tiers);
    for (const auto& choice : grid.policies) {
        const std::string name = to_string(choice.variant);
        for (int b = 0; b < econ.num_branches(); ++b) {
            int last = 0;
            for (double f : grid.cap_fractions)
                for (const auto& row : result.rows)
                    if (row.policy == name && row.branch == std::optional<BranchId>(BranchId{b}) &&
                        row.cap_fraction == f) {
                        CHECK(row.bradso_charged >= last);
                        last = row.bradso_charged;
                    }
        }
    }
}
