// Core domain types for cadet-branch matching economies: cadets, branches,
// service costs, contracts, quotas, priorities, preferences and allocations.
// Everything is immutable after construction and cheap to copy or share.
#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cbm {

// Library-wide error type. `code` is a stable machine-readable tag, the
// what() string carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Dense per-economy indices. Cadets are indexed in OML order (index 0 is the
// highest-merit cadet), branches in declaration order. Display names live in
// the Economy.
struct CadetId {
    std::int32_t v = -1;
    friend auto operator<=>(const CadetId&, const CadetId&) = default;
};

struct BranchId {
    std::int32_t v = -1;
    friend auto operator<=>(const BranchId&, const BranchId&) = default;
};

enum class Cost : std::uint8_t { Base, Increased };

inline const char* to_string(Cost c) { return c == Cost::Base ? "BASE" : "BRADSO"; }

struct Contract {
    CadetId cadet;
    BranchId branch;
    Cost cost;
    friend auto operator<=>(const Contract&, const Contract&) = default;
};

// A matched assignment; "unmatched" is an empty std::optional<Assignment>.
struct Assignment {
    BranchId branch;
    Cost cost;
    friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

using MaybeAssignment = std::optional<Assignment>;

struct BranchQuota {
    int total = 0;       // q_b
    int bradso_cap = 0;  // q_b^+, positions that may carry the increased cost
    int base_only() const { return total - bradso_cap; }  // q_b^0
};

// Strict total order over all cadets at one branch. Stored as a dense rank
// array (rank 0 = highest priority) so audits can report rank gaps.
class BaselinePriority {
public:
    BaselinePriority() = default;

    // `order` lists cadets from highest to lowest priority and must be a
    // permutation of 0..n-1.
    static BaselinePriority from_order(BranchId branch, const std::vector<CadetId>& order) {
        BaselinePriority p;
        p.branch_ = branch;
        p.order_ = order;
        p.rank_of_.assign(order.size(), -1);
        for (std::size_t r = 0; r < order.size(); ++r) {
            const auto c = order[r];
            if (c.v < 0 || static_cast<std::size_t>(c.v) >= order.size() || p.rank_of_[c.v] != -1)
                throw Error("priority.not_permutation",
                            "priority order is not a permutation of the cadet set");
            p.rank_of_[c.v] = static_cast<int>(r);
        }
        return p;
    }

    BranchId branch() const { return branch_; }
    int num_cadets() const { return static_cast<int>(order_.size()); }
    int rank(CadetId i) const { return rank_of_.at(i.v); }
    CadetId at_rank(int r) const { return order_.at(r); }
    const std::vector<CadetId>& order() const { return order_; }

    // i pi_b j: cadet i has strictly higher baseline priority than cadet j.
    bool higher(CadetId i, CadetId j) const { return rank_of_[i.v] < rank_of_[j.v]; }

    friend bool operator==(const BaselinePriority& a, const BaselinePriority& b) {
        return a.branch_ == b.branch_ && a.rank_of_ == b.rank_of_;
    }

private:
    BranchId branch_;
    std::vector<CadetId> order_;
    std::vector<int> rank_of_;
};

// Strict order on cadet-cost pairs used to award BRADSO-eligible positions.
// Two structural conditions hold by construction: pairs with a common cost
// follow the baseline priority, and every cadet's increased-cost pair
// precedes her base-cost pair.
class BradsoPolicy {
public:
    BradsoPolicy() = default;

    // `order` lists all 2n cadet-cost pairs from highest to lowest. Validates
    // both structural conditions against `pi` instead of trusting the input.
    static BradsoPolicy from_order(const BaselinePriority& pi,
                                   const std::vector<std::pair<CadetId, Cost>>& order) {
        const int n = pi.num_cadets();
        if (static_cast<int>(order.size()) != 2 * n)
            throw Error("policy.bad_size", "policy order must cover every cadet-cost pair");
        BradsoPolicy w;
        w.branch_ = pi.branch();
        w.rank_.assign(order.size(), -1);
        for (std::size_t r = 0; r < order.size(); ++r) {
            const auto [c, t] = order[r];
            if (c.v < 0 || c.v >= n) throw Error("policy.bad_cadet", "unknown cadet in policy order");
            const int key = pair_key(c, t);
            if (w.rank_[key] != -1)
                throw Error("policy.duplicate_pair", "duplicate cadet-cost pair in policy order");
            w.rank_[key] = static_cast<int>(r);
        }
        // Condition 1: same-cost pairs ordered exactly as the baseline priority.
        for (CadetId i{0}; i.v < n; ++i.v)
            for (CadetId j{0}; j.v < n; ++j.v)
                for (Cost t : {Cost::Base, Cost::Increased})
                    if (i.v != j.v && (w.rank(i, t) < w.rank(j, t)) != pi.higher(i, j))
                        throw Error("policy.priority_mismatch",
                                    "policy disagrees with baseline priority on a same-cost pair");
        // Condition 2: each cadet's increased-cost pair precedes her base-cost pair.
        for (CadetId i{0}; i.v < n; ++i.v)
            if (w.rank(i, Cost::Increased) >= w.rank(i, Cost::Base))
                throw Error("policy.cost_order",
                            "increased-cost pair must precede the base-cost pair");
        return w;
    }

    BranchId branch() const { return branch_; }
    int num_cadets() const { return static_cast<int>(rank_.size() / 2); }
    int rank(CadetId i, Cost t) const { return rank_.at(pair_key(i, t)); }

    // (i, ti) before (j, tj) in the policy order.
    bool higher(CadetId i, Cost ti, CadetId j, Cost tj) const {
        return rank(i, ti) < rank(j, tj);
    }

    std::vector<std::pair<CadetId, Cost>> order() const {
        std::vector<std::pair<CadetId, Cost>> out(rank_.size());
        for (int c = 0; c < num_cadets(); ++c)
            for (Cost t : {Cost::Base, Cost::Increased})
                out[rank_[pair_key(CadetId{c}, t)]] = {CadetId{c}, t};
        return out;
    }

    friend bool operator==(const BradsoPolicy& a, const BradsoPolicy& b) {
        return a.branch_ == b.branch_ && a.rank_ == b.rank_;
    }

private:
    static int pair_key(CadetId i, Cost t) { return 2 * i.v + (t == Cost::Increased ? 1 : 0); }

    BranchId branch_;
    std::vector<int> rank_;
};

// A cadet's strict order over branch-cost pairs with an explicit unmatched
// cutoff. Pairs listed after the cutoff, and pairs not listed at all, are
// unacceptable. The domain restriction that a base-cost position is always
// preferred to the increased-cost position at the same branch is enforced at
// construction.
class ContractPreference {
public:
    ContractPreference() = default;

    static ContractPreference make(CadetId cadet,
                                   std::vector<std::pair<BranchId, Cost>> acceptable,
                                   std::vector<std::pair<BranchId, Cost>> unacceptable = {}) {
        ContractPreference p;
        p.cadet_ = cadet;
        p.acceptable_ = std::move(acceptable);
        p.unacceptable_ = std::move(unacceptable);
        std::vector<std::pair<BranchId, Cost>> all = p.acceptable_;
        all.insert(all.end(), p.unacceptable_.begin(), p.unacceptable_.end());
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = i + 1; j < all.size(); ++j)
                if (all[i] == all[j])
                    throw Error("preference.duplicate", "duplicate branch-cost entry in preference");
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (all[i].second != Cost::Increased) continue;
            bool base_above = false;
            for (std::size_t j = 0; j < i; ++j)
                if (all[j].first == all[i].first && all[j].second == Cost::Base) base_above = true;
            if (!base_above)
                throw Error("preference.cost_order",
                            "increased-cost entry requires the base-cost entry strictly above it");
        }
        return p;
    }

    CadetId cadet() const { return cadet_; }
    const std::vector<std::pair<BranchId, Cost>>& acceptable() const { return acceptable_; }
    const std::vector<std::pair<BranchId, Cost>>& unacceptable_tail() const { return unacceptable_; }

    bool accepts(BranchId b, Cost t) const {
        return std::find(acceptable_.begin(), acceptable_.end(), std::make_pair(b, t)) !=
               acceptable_.end();
    }

    // Position in the full ranked list; the unmatched cutoff sits at
    // acceptable().size(). Pairs absent from the list share the worst slot.
    int position(const MaybeAssignment& a) const {
        const int cutoff = static_cast<int>(acceptable_.size());
        if (!a.has_value()) return cutoff;
        const std::pair<BranchId, Cost> key{a->branch, a->cost};
        for (int i = 0; i < cutoff; ++i)
            if (acceptable_[i] == key) return i;
        for (int k = 0; k < static_cast<int>(unacceptable_.size()); ++k)
            if (unacceptable_[k] == key) return cutoff + 1 + k;
        return cutoff + 1 + static_cast<int>(unacceptable_.size());
    }

    bool prefers(const MaybeAssignment& a, const MaybeAssignment& b) const {
        return position(a) < position(b);
    }

    friend bool operator==(const ContractPreference&, const ContractPreference&) = default;

private:
    CadetId cadet_;
    std::vector<std::pair<BranchId, Cost>> acceptable_;
    std::vector<std::pair<BranchId, Cost>> unacceptable_;
};

enum class Ordering { FirstPreferred, SecondPreferred, Equal };

// Strict comparison of two assignments under a cadet's preference. Unranked
// pairs are unacceptable (below unmatched) and mutually tie; everything else
// is strictly ordered by the ranked list.
inline Ordering compare_assignments(const ContractPreference& pref, const MaybeAssignment& a,
                                    const MaybeAssignment& b) {
    const int pa = pref.position(a);
    const int pb = pref.position(b);
    if (pa < pb) return Ordering::FirstPreferred;
    if (pb < pa) return Ordering::SecondPreferred;
    return Ordering::Equal;
}

// A cadet's message in a quasi-direct mechanism: a strict order over
// acceptable branches plus the set of branches she is willing to serve at the
// increased cost. The willingness set may name unranked branches; mechanisms
// ignore such entries.
class QuasiStrategy {
public:
    QuasiStrategy() = default;

    static QuasiStrategy make(CadetId cadet, std::vector<BranchId> branch_order,
                              std::vector<BranchId> bradso_set) {
        QuasiStrategy s;
        s.cadet_ = cadet;
        s.branch_order_ = std::move(branch_order);
        for (std::size_t i = 0; i < s.branch_order_.size(); ++i)
            for (std::size_t j = i + 1; j < s.branch_order_.size(); ++j)
                if (s.branch_order_[i] == s.branch_order_[j])
                    throw Error("strategy.duplicate", "duplicate branch in strategy order");
        s.bradso_set_ = std::move(bradso_set);
        std::sort(s.bradso_set_.begin(), s.bradso_set_.end());
        s.bradso_set_.erase(std::unique(s.bradso_set_.begin(), s.bradso_set_.end()),
                            s.bradso_set_.end());
        return s;
    }

    CadetId cadet() const { return cadet_; }
    const std::vector<BranchId>& branch_order() const { return branch_order_; }
    const std::vector<BranchId>& bradso_set() const { return bradso_set_; }

    bool willing(BranchId b) const {
        return std::binary_search(bradso_set_.begin(), bradso_set_.end(), b);
    }

    bool ranks(BranchId b) const {
        return std::find(branch_order_.begin(), branch_order_.end(), b) != branch_order_.end();
    }

    // Position of b in the submitted branch order, with the unmatched cutoff
    // at branch_order().size(); unranked branches fall below the cutoff.
    int position(const std::optional<BranchId>& b) const {
        const int cutoff = static_cast<int>(branch_order_.size());
        if (!b.has_value()) return cutoff;
        for (int i = 0; i < cutoff; ++i)
            if (branch_order_[i] == *b) return i;
        return cutoff + 1;
    }

    QuasiStrategy with_bradso_dropped(BranchId b) const {
        std::vector<BranchId> kept;
        for (auto x : bradso_set_)
            if (x != b) kept.push_back(x);
        return make(cadet_, branch_order_, std::move(kept));
    }

    friend bool operator==(const QuasiStrategy&, const QuasiStrategy&) = default;

private:
    CadetId cadet_;
    std::vector<BranchId> branch_order_;
    std::vector<BranchId> bradso_set_;
};

// A set of contracts. Feasibility (one contract per cadet, branch totals,
// per-branch increased-cost caps) is checked by validate_allocation, not by
// the constructor, so invalid candidate sets can be loaded and audited.
class Allocation {
public:
    Allocation() = default;

    static Allocation from_contracts(std::vector<Contract> contracts) {
        Allocation a;
        a.contracts_ = std::move(contracts);
        std::sort(a.contracts_.begin(), a.contracts_.end());
        return a;
    }

    const std::vector<Contract>& contracts() const { return contracts_; }

    MaybeAssignment assignment_of(CadetId i) const {
        for (const auto& x : contracts_)
            if (x.cadet == i) return Assignment{x.branch, x.cost};
        return std::nullopt;
    }

    // Dense per-cadet lookup table, index = cadet id.
    std::vector<MaybeAssignment> table(int num_cadets) const {
        std::vector<MaybeAssignment> t(num_cadets);
        for (const auto& x : contracts_) t.at(x.cadet.v) = Assignment{x.branch, x.cost};
        return t;
    }

    friend bool operator==(const Allocation&, const Allocation&) = default;

private:
    std::vector<Contract> contracts_;
};

// An immutable problem instance. Cadets are listed in OML order; each branch
// carries its quota, baseline priority and BRADSO policy.
class Economy {
public:
    Economy() = default;

    static Economy make(std::vector<std::string> cadet_names,
                        std::vector<std::string> branch_names, std::vector<BranchQuota> quotas,
                        std::vector<BaselinePriority> priorities,
                        std::vector<BradsoPolicy> policies) {
        Economy e;
        e.cadet_names_ = std::move(cadet_names);
        e.branch_names_ = std::move(branch_names);
        e.quotas_ = std::move(quotas);
        e.priorities_ = std::move(priorities);
        e.policies_ = std::move(policies);
        if (e.cadet_names_.empty()) throw Error("economy.no_cadets", "economy has no cadets");
        if (e.branch_names_.empty()) throw Error("economy.no_branches", "economy has no branches");
        if (e.quotas_.size() != e.branch_names_.size() ||
            e.priorities_.size() != e.branch_names_.size() ||
            e.policies_.size() != e.branch_names_.size())
            throw Error("economy.shape", "each branch needs exactly one quota, priority and policy");
        int total = 0;
        for (std::size_t b = 0; b < e.quotas_.size(); ++b) {
            const auto& q = e.quotas_[b];
            if (q.total < 0 || q.bradso_cap < 0 || q.bradso_cap > q.total)
                throw Error("economy.quota", "branch quota requires 0 <= bradso_cap <= total");
            total += q.total;
            if (e.priorities_[b].branch().v != static_cast<int>(b) ||
                e.policies_[b].branch().v != static_cast<int>(b))
                throw Error("economy.shape", "priority/policy attached to the wrong branch");
            if (e.priorities_[b].num_cadets() != static_cast<int>(e.cadet_names_.size()) ||
                e.policies_[b].num_cadets() != static_cast<int>(e.cadet_names_.size()))
                throw Error("economy.shape", "priority/policy does not cover the cadet set");
        }
        if (total <= 0) throw Error("economy.quota", "sum of branch totals must be positive");
        return e;
    }

    int num_cadets() const { return static_cast<int>(cadet_names_.size()); }
    int num_branches() const { return static_cast<int>(branch_names_.size()); }
    const std::string& cadet_name(CadetId i) const { return cadet_names_.at(i.v); }
    const std::string& branch_name(BranchId b) const { return branch_names_.at(b.v); }
    const std::vector<std::string>& cadet_names() const { return cadet_names_; }
    const std::vector<std::string>& branch_names() const { return branch_names_; }
    const BranchQuota& quota(BranchId b) const { return quotas_.at(b.v); }
    const BaselinePriority& priority(BranchId b) const { return priorities_.at(b.v); }
    const BradsoPolicy& policy(BranchId b) const { return policies_.at(b.v); }

    std::optional<CadetId> find_cadet(const std::string& name) const {
        for (int i = 0; i < num_cadets(); ++i)
            if (cadet_names_[i] == name) return CadetId{i};
        return std::nullopt;
    }

    std::optional<BranchId> find_branch(const std::string& name) const {
        for (int b = 0; b < num_branches(); ++b)
            if (branch_names_[b] == name) return BranchId{b};
        return std::nullopt;
    }

    // The OML order: cadet index order, shared by every branch in the
    // merit-based (pre-2020) regime.
    BaselinePriority oml(BranchId b = BranchId{0}) const {
        std::vector<CadetId> order(cadet_names_.size());
        for (int i = 0; i < num_cadets(); ++i) order[i] = CadetId{i};
        return BaselinePriority::from_order(b, order);
    }

    Economy with_policies(std::vector<BradsoPolicy> policies) const {
        return make(cadet_names_, branch_names_, quotas_, priorities_, std::move(policies));
    }

    Economy with_quotas(std::vector<BranchQuota> quotas) const {
        return make(cadet_names_, branch_names_, std::move(quotas), priorities_, policies_);
    }

private:
    std::vector<std::string> cadet_names_;
    std::vector<std::string> branch_names_;
    std::vector<BranchQuota> quotas_;
    std::vector<BaselinePriority> priorities_;
    std::vector<BradsoPolicy> policies_;
};

// One violated feasibility condition, in terms of the defining counts.
struct AllocationViolation {
    int condition = 0;  // 1: cadet in multiple contracts, 2: branch total, 3: increased-cost cap
    CadetId cadet{};    // set for condition 1
    BranchId branch{};  // set for conditions 2 and 3
    int count = 0;
    int limit = 0;
};

struct ValidityReport {
    bool ok = true;
    std::vector<AllocationViolation> violations;
};

// Checks the three feasibility conditions by direct counting. Unknown ids
// raise a resolution error, distinct from a constraint violation.
inline ValidityReport validate_allocation(const Economy& econ, const Allocation& alloc) {
    std::vector<int> per_cadet(econ.num_cadets(), 0);
    std::vector<int> per_branch(econ.num_branches(), 0);
    std::vector<int> increased(econ.num_branches(), 0);
    for (const auto& x : alloc.contracts()) {
        if (x.cadet.v < 0 || x.cadet.v >= econ.num_cadets())
            throw Error("allocation.unknown_cadet", "contract names a cadet outside the economy");
        if (x.branch.v < 0 || x.branch.v >= econ.num_branches())
            throw Error("allocation.unknown_branch", "contract names a branch outside the economy");
        ++per_cadet[x.cadet.v];
        ++per_branch[x.branch.v];
        if (x.cost == Cost::Increased) ++increased[x.branch.v];
    }
    ValidityReport report;
    for (int i = 0; i < econ.num_cadets(); ++i)
        if (per_cadet[i] > 1)
            report.violations.push_back({1, CadetId{i}, BranchId{}, per_cadet[i], 1});
    for (int b = 0; b < econ.num_branches(); ++b) {
        if (per_branch[b] > econ.quota(BranchId{b}).total)
            report.violations.push_back(
                {2, CadetId{}, BranchId{b}, per_branch[b], econ.quota(BranchId{b}).total});
        if (increased[b] > econ.quota(BranchId{b}).bradso_cap)
            report.violations.push_back(
                {3, CadetId{}, BranchId{b}, increased[b], econ.quota(BranchId{b}).bradso_cap});
    }
    report.ok = report.violations.empty();
    return report;
}

}  // namespace cbm
