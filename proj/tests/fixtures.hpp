// Shared instances for the test suites: the worked single-branch example, the
// two knife-edge scenarios, the three-cadet incomplete-information game, and
// deterministic random-instance generators for property tests.
#pragma once

#include <string>
#include <vector>

#include "cbm/core.hpp"
#include "cbm/equilibrium.hpp"
#include "cbm/io.hpp"
#include "cbm/policies.hpp"

namespace fixtures {

using namespace cbm;

inline CadetId cid(const Economy& e, const std::string& name) {
    auto c = e.find_cadet(name);
    if (!c) throw Error("fixture", "no cadet " + name);
    return *c;
}

inline BranchId bid(const Economy& e, const std::string& name) {
    auto b = e.find_branch(name);
    if (!b) throw Error("fixture", "no branch " + name);
    return *b;
}

// Single branch b with 3 base-only and 3 BRADSO-eligible positions; priority
// i6 > i5 > i4 > i3 > i2 > i1 > j1 > j2; ultimate policy.
inline Economy example1_economy() {
    std::vector<std::string> cadets{"i6", "i5", "i4", "i3", "i2", "i1", "j1", "j2"};
    std::vector<CadetId> order;
    for (int i = 0; i < 8; ++i) order.push_back(CadetId{i});
    auto pi = BaselinePriority::from_order(BranchId{0}, order);
    return Economy::make(cadets, {"b"}, {BranchQuota{6, 3}}, {pi}, {ultimate_policy(pi)});
}

// The increased cost is acceptable to i1, i3, i5, j1 and unacceptable to the
// rest; everyone finds the base cost acceptable.
inline std::vector<ContractPreference> example1_preferences(const Economy& e) {
    std::vector<ContractPreference> prefs(e.num_cadets());
    const BranchId b{0};
    for (int i = 0; i < e.num_cadets(); ++i) {
        const std::string& name = e.cadet_name(CadetId{i});
        const bool wants_increased =
            name == "i1" || name == "i3" || name == "i5" || name == "j1";
        if (wants_increased)
            prefs[i] = ContractPreference::make(CadetId{i},
                                                {{b, Cost::Base}, {b, Cost::Increased}});
        else
            prefs[i] = ContractPreference::make(CadetId{i}, {{b, Cost::Base}},
                                                {{b, Cost::Increased}});
    }
    return prefs;
}

// Same economy, but j2 also finds the increased cost acceptable.
inline std::vector<ContractPreference> scenario2_preferences(const Economy& e) {
    auto prefs = example1_preferences(e);
    const CadetId j2 = cid(e, "j2");
    prefs[j2.v] =
        ContractPreference::make(j2, {{BranchId{0}, Cost::Base}, {BranchId{0}, Cost::Increased}});
    return prefs;
}

inline Allocation example1_expected(const Economy& e) {
    const BranchId b{0};
    return Allocation::from_contracts({{cid(e, "i1"), b, Cost::Increased},
                                       {cid(e, "i3"), b, Cost::Base},
                                       {cid(e, "i4"), b, Cost::Base},
                                       {cid(e, "i5"), b, Cost::Base},
                                       {cid(e, "i6"), b, Cost::Base},
                                       {cid(e, "j1"), b, Cost::Increased}});
}

inline Allocation scenario2_expected(const Economy& e) {
    const BranchId b{0};
    return Allocation::from_contracts({{cid(e, "i1"), b, Cost::Increased},
                                       {cid(e, "i3"), b, Cost::Increased},
                                       {cid(e, "i4"), b, Cost::Base},
                                       {cid(e, "i5"), b, Cost::Base},
                                       {cid(e, "i6"), b, Cost::Base},
                                       {cid(e, "j1"), b, Cost::Increased}});
}

// Quasi-strategy profile on the single-branch economy: everyone ranks b and
// the named cadets declare willingness.
inline std::vector<QuasiStrategy> willingness_profile(const Economy& e,
                                                      const std::vector<std::string>& willing) {
    std::vector<QuasiStrategy> s;
    for (int i = 0; i < e.num_cadets(); ++i) {
        std::vector<BranchId> w;
        for (const auto& name : willing)
            if (cid(e, name) == CadetId{i}) w.push_back(BranchId{0});
        s.push_back(QuasiStrategy::make(CadetId{i}, {BranchId{0}}, w));
    }
    return s;
}

// Three cadets, priority i1 > i2 > i3, one base-only and one BRADSO-eligible
// position, ultimate policy; each cadet is privately one of two equally
// likely utility types which differ on whether the increased cost beats
// staying unmatched.
inline BayesianGame example3_game() {
    std::vector<std::string> cadets{"i1", "i2", "i3"};
    std::vector<CadetId> order{CadetId{0}, CadetId{1}, CadetId{2}};
    auto pi = BaselinePriority::from_order(BranchId{0}, order);
    Economy econ =
        Economy::make(cadets, {"b"}, {BranchQuota{2, 1}}, {pi}, {ultimate_policy(pi)});
    const CadetType type1{Rational{1, 2}, Rational{10}, Rational{0}, Rational{8}};
    const CadetType type2{Rational{1, 2}, Rational{10}, Rational{8}, Rational{0}};
    std::vector<std::vector<CadetType>> types(3, {type1, type2});
    return BayesianGame::make(std::move(econ), std::move(types));
}

// ---------------------------------------------------------------------------
// Random instances

// Random multi-branch economy with tier-consistent priorities. Policies are
// drawn per branch from {ultimate, tier2020, tier2021} unless forced.
inline Economy random_economy(Rng& rng, int cadets, int branches, int max_total,
                              std::vector<TierAssignment>* tiers_out = nullptr,
                              const char* force_variant = nullptr) {
    std::vector<std::string> cadet_names, branch_names;
    for (int i = 0; i < cadets; ++i) cadet_names.push_back("c" + std::to_string(i + 1));
    for (int b = 0; b < branches; ++b) branch_names.push_back("B" + std::to_string(b + 1));
    std::vector<BranchQuota> quotas;
    std::vector<BaselinePriority> priorities;
    std::vector<BradsoPolicy> policies;
    std::vector<TierAssignment> tiers;
    for (int b = 0; b < branches; ++b) {
        const int total = rng.uniform_int(1, max_total);
        quotas.push_back({total, rng.uniform_int(0, total)});
        std::vector<CadetId> order;
        for (int i = 0; i < cadets; ++i) order.push_back(CadetId{i});
        rng.shuffle(order);
        priorities.push_back(BaselinePriority::from_order(BranchId{b}, order));
        // Random tier boundaries over the priority order.
        const int num_tiers = rng.uniform_int(1, std::min(3, cadets));
        std::vector<int> tier_of(cadets);
        std::vector<int> cuts;
        for (int t = 0; t + 1 < num_tiers; ++t) cuts.push_back(rng.uniform_int(0, cadets));
        std::sort(cuts.begin(), cuts.end());
        for (int r = 0; r < cadets; ++r) {
            int tier = 0;
            for (int c : cuts)
                if (r >= c) ++tier;
            tier_of[order[r].v] = tier;
        }
        tiers.push_back(TierAssignment::make(priorities[b], tier_of));
        const int variant = force_variant ? -1 : rng.uniform_int(0, 2);
        if (force_variant ? std::string(force_variant) == "ultimate" : variant == 0)
            policies.push_back(ultimate_policy(priorities[b]));
        else if (force_variant ? std::string(force_variant) == "tier2020" : variant == 1)
            policies.push_back(tiered_policy(priorities[b], tiers[b], TieredVariant::Tier2020));
        else
            policies.push_back(tiered_policy(priorities[b], tiers[b], TieredVariant::Tier2021));
    }
    if (tiers_out) *tiers_out = tiers;
    return Economy::make(cadet_names, branch_names, quotas, priorities, policies);
}

// Merit-based regime: every branch shares the OML priority and the ultimate
// policy, as the 2006 mechanism requires.
inline Economy random_merit_economy(Rng& rng, int cadets, int branches, int max_total) {
    std::vector<std::string> cadet_names, branch_names;
    for (int i = 0; i < cadets; ++i) cadet_names.push_back("c" + std::to_string(i + 1));
    for (int b = 0; b < branches; ++b) branch_names.push_back("B" + std::to_string(b + 1));
    std::vector<BranchQuota> quotas;
    std::vector<BaselinePriority> priorities;
    std::vector<BradsoPolicy> policies;
    for (int b = 0; b < branches; ++b) {
        const int total = rng.uniform_int(1, max_total);
        quotas.push_back({total, rng.uniform_int(0, total)});
        std::vector<CadetId> order;
        for (int i = 0; i < cadets; ++i) order.push_back(CadetId{i});
        priorities.push_back(BaselinePriority::from_order(BranchId{b}, order));
        policies.push_back(ultimate_policy(priorities[b]));
    }
    return Economy::make(cadet_names, branch_names, quotas, priorities, policies);
}

// Random quasi-strategies over an economy.
inline std::vector<QuasiStrategy> random_strategies(Rng& rng, const Economy& econ,
                                                    double willingness = 0.5) {
    std::vector<QuasiStrategy> out;
    for (int i = 0; i < econ.num_cadets(); ++i) {
        std::vector<BranchId> branches;
        for (int b = 0; b < econ.num_branches(); ++b) branches.push_back(BranchId{b});
        rng.shuffle(branches);
        branches.resize(rng.uniform_int(0, econ.num_branches()));
        std::vector<BranchId> willing;
        for (int b = 0; b < econ.num_branches(); ++b)
            if (rng.uniform01() < willingness) willing.push_back(BranchId{b});
        out.push_back(QuasiStrategy::make(CadetId{i}, branches, willing));
    }
    return out;
}

// Random preference in the restricted domain: a ranking of some branches at
// base cost with increased-cost entries spliced in below their base entries.
inline ContractPreference random_preference(Rng& rng, const Economy& econ, CadetId cadet,
                                            double willingness = 0.5) {
    const int m = econ.num_branches();
    std::vector<BranchId> branches;
    for (int b = 0; b < m; ++b) branches.push_back(BranchId{b});
    rng.shuffle(branches);
    const int len = rng.uniform_int(0, m);
    std::vector<std::pair<BranchId, Cost>> entries;
    for (int k = 0; k < len; ++k) entries.emplace_back(branches[k], Cost::Base);
    for (int k = 0; k < len; ++k) {
        if (rng.uniform01() >= willingness) continue;
        std::size_t base_pos = 0;
        for (std::size_t p = 0; p < entries.size(); ++p)
            if (entries[p] == std::make_pair(branches[k], Cost::Base)) base_pos = p;
        const int pos =
            rng.uniform_int(static_cast<int>(base_pos) + 1, static_cast<int>(entries.size()));
        entries.insert(entries.begin() + pos, {branches[k], Cost::Increased});
    }
    return ContractPreference::make(cadet, entries);
}

inline std::vector<ContractPreference> random_preferences(Rng& rng, const Economy& econ,
                                                          double willingness = 0.5) {
    std::vector<ContractPreference> prefs;
    for (int i = 0; i < econ.num_cadets(); ++i)
        prefs.push_back(random_preference(rng, econ, CadetId{i}, willingness));
    return prefs;
}

// Random viable single-branch pool over the given cadet count.
inline std::vector<Contract> random_viable_pool(Rng& rng, int cadets, BranchId branch) {
    std::vector<Contract> pool;
    for (int i = 0; i < cadets; ++i) {
        const int r = rng.uniform_int(0, 3);
        if (r == 0) continue;                                  // cadet absent
        pool.push_back({CadetId{i}, branch, Cost::Base});      // base alone or with increased
        if (r == 2) pool.push_back({CadetId{i}, branch, Cost::Increased});
    }
    return pool;
}

}  // namespace fixtures
