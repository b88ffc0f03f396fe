// Construction and comparison of BRADSO policies: the ultimate policy, the
// 2020/2021 tiered variants, the native order used by the branch choice rule,
// and the effectiveness partial order between policies.
#pragma once

#include <utility>
#include <vector>

#include "cbm/core.hpp"

namespace cbm {

// Mirrors the baseline priority on cadet-cost pairs: all pairs of a
// higher-priority cadet precede all pairs of a lower-priority cadet, and each
// cadet's base-cost pair precedes her increased-cost pair.
class NativeOrder {
public:
    NativeOrder() = default;

    explicit NativeOrder(const BaselinePriority& pi) {
        branch_ = pi.branch();
        rank_.assign(2 * pi.num_cadets(), -1);
        int r = 0;
        for (int k = 0; k < pi.num_cadets(); ++k) {
            const CadetId i = pi.at_rank(k);
            rank_[pair_key(i, Cost::Base)] = r++;
            rank_[pair_key(i, Cost::Increased)] = r++;
        }
    }

    BranchId branch() const { return branch_; }
    int rank(CadetId i, Cost t) const { return rank_.at(pair_key(i, t)); }
    bool higher(CadetId i, Cost ti, CadetId j, Cost tj) const {
        return rank(i, ti) < rank(j, tj);
    }

private:
    static int pair_key(CadetId i, Cost t) { return 2 * i.v + (t == Cost::Increased ? 1 : 0); }

    BranchId branch_;
    std::vector<int> rank_;
};

inline NativeOrder native_order(const BaselinePriority& priority) { return NativeOrder(priority); }

// Partition of the cadets into ordered rating tiers (tier 0 is best),
// consistent with the branch's baseline priority: every cadet in a better
// tier outranks every cadet in a worse tier.
class TierAssignment {
public:
    TierAssignment() = default;

    static TierAssignment make(const BaselinePriority& pi, std::vector<int> tier_of) {
        TierAssignment t;
        t.branch_ = pi.branch();
        t.tier_of_ = std::move(tier_of);
        if (static_cast<int>(t.tier_of_.size()) != pi.num_cadets())
            throw Error("tiers.shape", "tier assignment must cover every cadet");
        t.num_tiers_ = 0;
        for (int v : t.tier_of_) {
            if (v < 0) throw Error("tiers.value", "tier indices must be non-negative");
            t.num_tiers_ = std::max(t.num_tiers_, v + 1);
        }
        // Consistency: scanning cadets by priority, tiers never improve.
        for (int r = 1; r < pi.num_cadets(); ++r)
            if (t.tier_of_[pi.at_rank(r).v] < t.tier_of_[pi.at_rank(r - 1).v])
                throw Error("tiers.inconsistent",
                            "tier assignment conflicts with the baseline priority");
        return t;
    }

    static TierAssignment single_tier(const BaselinePriority& pi) {
        return make(pi, std::vector<int>(pi.num_cadets(), 0));
    }

    BranchId branch() const { return branch_; }
    int num_tiers() const { return num_tiers_; }
    int tier(CadetId i) const { return tier_of_.at(i.v); }
    const std::vector<int>& tier_of() const { return tier_of_; }

private:
    BranchId branch_;
    std::vector<int> tier_of_;
    int num_tiers_ = 0;
};

// Willingness to serve the increased cost overrides every difference in the
// baseline ranking: all increased-cost pairs precede all base-cost pairs.
inline BradsoPolicy ultimate_policy(const BaselinePriority& priority) {
    std::vector<std::pair<CadetId, Cost>> order;
    order.reserve(2 * priority.num_cadets());
    for (int r = 0; r < priority.num_cadets(); ++r)
        order.emplace_back(priority.at_rank(r), Cost::Increased);
    for (int r = 0; r < priority.num_cadets(); ++r)
        order.emplace_back(priority.at_rank(r), Cost::Base);
    return BradsoPolicy::from_order(priority, order);
}

enum class TieredVariant { Tier2020, Tier2021 };

// Tiered policies. Under the 2020 variant willingness overrides the baseline
// ranking only among cadets of the same tier. Under the 2021 variant a
// willing cadet in any tier above the worst jumps over every base-cost pair,
// while worst-tier volunteers are boosted only within their own tier.
inline BradsoPolicy tiered_policy(const BaselinePriority& priority, const TierAssignment& tiers,
                                  TieredVariant variant) {
    if (tiers.branch() != priority.branch())
        throw Error("policy.branch_mismatch", "tier assignment belongs to a different branch");
    const int n = priority.num_cadets();
    if (static_cast<int>(tiers.tier_of().size()) != n)
        throw Error("tiers.shape", "tier assignment must cover every cadet");
    std::vector<std::vector<CadetId>> by_tier(tiers.num_tiers());
    for (int r = 0; r < n; ++r) {
        const CadetId i = priority.at_rank(r);
        by_tier[tiers.tier(i)].push_back(i);  // priority order within each tier
    }
    std::vector<std::pair<CadetId, Cost>> order;
    order.reserve(2 * n);
    if (variant == TieredVariant::Tier2020) {
        for (const auto& tier : by_tier) {
            for (CadetId i : tier) order.emplace_back(i, Cost::Increased);
            for (CadetId i : tier) order.emplace_back(i, Cost::Base);
        }
    } else {
        const int last = tiers.num_tiers() - 1;
        for (int t = 0; t < last; ++t)
            for (CadetId i : by_tier[t]) order.emplace_back(i, Cost::Increased);
        for (int t = 0; t < last; ++t)
            for (CadetId i : by_tier[t]) order.emplace_back(i, Cost::Base);
        for (CadetId i : by_tier[last]) order.emplace_back(i, Cost::Increased);
        for (CadetId i : by_tier[last]) order.emplace_back(i, Cost::Base);
    }
    return BradsoPolicy::from_order(priority, order);
}

enum class Effectiveness { FirstMoreEffective, SecondMoreEffective, Equal, Incomparable };

// Compares how far two policies over the same branch and baseline priority
// let willingness boost a cadet past others' base-cost claims. a is weakly
// more effective than b when every boost granted by b is also granted by a.
inline Effectiveness weakly_more_effective(const BradsoPolicy& a, const BradsoPolicy& b) {
    if (a.branch() != b.branch() || a.num_cadets() != b.num_cadets())
        throw Error("policy.branch_mismatch", "policies compare only within one branch");
    const int n = a.num_cadets();
    // Same underlying priority: the base-cost blocks must order cadets alike.
    for (CadetId i{0}; i.v < n; ++i.v)
        for (CadetId j{0}; j.v < n; ++j.v)
            if ((a.rank(i, Cost::Base) < a.rank(j, Cost::Base)) !=
                (b.rank(i, Cost::Base) < b.rank(j, Cost::Base)))
                throw Error("policy.priority_mismatch",
                            "policies are built on different baseline priorities");
    bool a_covers_b = true;  // every boost of b also present in a
    bool b_covers_a = true;
    for (CadetId i{0}; i.v < n; ++i.v)
        for (CadetId j{0}; j.v < n; ++j.v) {
            const bool in_a = a.higher(i, Cost::Increased, j, Cost::Base);
            const bool in_b = b.higher(i, Cost::Increased, j, Cost::Base);
            if (in_b && !in_a) a_covers_b = false;
            if (in_a && !in_b) b_covers_a = false;
        }
    if (a_covers_b && b_covers_a) return Effectiveness::Equal;
    if (a_covers_b) return Effectiveness::FirstMoreEffective;
    if (b_covers_a) return Effectiveness::SecondMoreEffective;
    return Effectiveness::Incomparable;
}

}  // namespace cbm
