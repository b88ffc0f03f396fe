// Field-metric computation, truthful-strategy projection, comparative statics
// of the branch choice rule, and the cap-by-policy sweep harness.
#pragma once

#include <atomic>
#include <future>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cbm/axioms.hpp"
#include "cbm/core.hpp"
#include "cbm/mechanisms.hpp"
#include "cbm/policies.hpp"

namespace cbm {

// Projects contract preferences onto the quasi-direct strategy space: the
// branch ranking follows the positions of the base-cost pairs, and a cadet is
// willing to serve the increased cost at every branch whose increased-cost
// pair she finds acceptable anywhere on her list.
inline std::vector<QuasiStrategy> project_truthful(const std::vector<ContractPreference>& prefs) {
    std::vector<QuasiStrategy> out;
    out.reserve(prefs.size());
    for (const auto& p : prefs) {
        std::vector<BranchId> order;
        std::vector<BranchId> willing;
        for (const auto& [b, t] : p.acceptable()) {
            if (t == Cost::Base)
                order.push_back(b);
            else
                willing.push_back(b);
        }
        out.push_back(QuasiStrategy::make(p.cadet(), std::move(order), std::move(willing)));
    }
    return out;
}

// Counts reported alongside a mechanism outcome. Counterfactual metrics are
// absent when no re-runnable quasi-direct mechanism applies; the full
// priority-reversal count is absent when contract preferences are unknown.
// Each present count equals the length of its witness list.
struct MetricsSummary {
    std::optional<AxiomReport> strategic_bradso_report;  // willingness gratuitous yet uncharged
    std::optional<AxiomReport> bradso_ic_report;
    std::optional<AxiomReport> detectable_reversal_report;
    std::optional<AxiomReport> priority_reversal_report;
    int bradso_charged_total = 0;
    std::vector<int> bradso_charged_by_branch;

    static std::optional<int> count(const std::optional<AxiomReport>& r) {
        if (!r) return std::nullopt;
        return static_cast<int>(r->witnesses.size());
    }
    std::optional<int> strategic_bradso() const { return count(strategic_bradso_report); }
    std::optional<int> bradso_ic_failures() const { return count(bradso_ic_report); }
    std::optional<int> detectable_priority_reversals() const {
        return count(detectable_reversal_report);
    }
    std::optional<int> priority_reversals() const { return count(priority_reversal_report); }

    std::vector<int> per_branch(const std::optional<AxiomReport>& r, int num_branches) const {
        std::vector<int> out(num_branches, 0);
        if (r)
            for (const auto& w : r->witnesses)
                if (w.branch) ++out[w.branch->v];
        return out;
    }
};

// A cadet registers on this metric when she was assigned a branch at the base
// cost, had declared willingness there, and would still have received the
// same base-cost position after withdrawing that willingness.
inline AxiomReport strategic_bradso_metric(const QuasiDirectMechanism& mechanism,
                                           const Economy& econ,
                                           const std::vector<QuasiStrategy>& strategies,
                                           const Allocation& alloc) {
    AxiomReport report{"strategic-bradso"};
    const auto table = alloc.table(econ.num_cadets());
    for (int i = 0; i < econ.num_cadets(); ++i) {
        if (!table[i].has_value() || table[i]->cost != Cost::Base) continue;
        const BranchId b = table[i]->branch;
        if (!strategies[i].willing(b)) continue;
        auto counterfactual = strategies;
        counterfactual[i] = strategies[i].with_bradso_dropped(b);
        const auto rerun = mechanism.run(econ, counterfactual).table(econ.num_cadets());
        if (rerun[i] != table[i]) continue;
        std::ostringstream os;
        os << "cadet " << econ.cadet_name(CadetId{i}) << " declared willingness at "
           << econ.branch_name(b)
           << " but would have received the same base-cost position without it";
        report.holds = false;
        report.witnesses.push_back({{CadetId{i}}, b, 0, os.str()});
    }
    return report;
}

inline MetricsSummary compute_metrics(const Economy& econ, const Allocation& alloc,
                                      const QuasiDirectMechanism* mechanism,
                                      const std::vector<QuasiStrategy>* strategies,
                                      const std::vector<ContractPreference>* contract_prefs) {
    MetricsSummary m;
    m.bradso_charged_by_branch.assign(econ.num_branches(), 0);
    for (const auto& x : alloc.contracts())
        if (x.cost == Cost::Increased) {
            ++m.bradso_charged_total;
            ++m.bradso_charged_by_branch[x.branch.v];
        }
    if (strategies) {
        m.detectable_reversal_report =
            check_detectable_priority_reversals(econ, *strategies, alloc);
        if (mechanism) {
            m.bradso_ic_report = check_bradso_ic(*mechanism, econ, *strategies);
            m.strategic_bradso_report =
                strategic_bradso_metric(*mechanism, econ, *strategies, alloc);
        }
    }
    if (contract_prefs)
        m.priority_reversal_report = check_priority_reversals(econ, *contract_prefs, alloc);
    return m;
}

// ---------------------------------------------------------------------------
// Comparative statics of the branch choice rule

inline int count_increased(const std::vector<Contract>& contracts) {
    int c = 0;
    for (const auto& x : contracts)
        if (x.cost == Cost::Increased) ++c;
    return c;
}

struct MonotonicityVerdict {
    bool holds = true;
    std::vector<std::vector<int>> counts;  // [policy][cap] accepted increased-cost contracts
    std::optional<std::string> violation;  // first violated comparison, if any
};

// Evaluates the choice rule over the cap-by-policy grid and checks that the
// number of accepted increased-cost contracts is weakly increasing in the cap
// (branch total fixed) and along the effectiveness-ordered policy chain.
inline MonotonicityVerdict bradso_monotonicity_check(int branch_total,
                                                     const BaselinePriority& priority,
                                                     const std::vector<Contract>& pool,
                                                     const std::vector<int>& caps,
                                                     const std::vector<BradsoPolicy>& policies) {
    for (std::size_t k = 0; k + 1 < caps.size(); ++k)
        if (caps[k] > caps[k + 1]) throw Error("analysis.caps", "cap list must be ascending");
    for (std::size_t p = 0; p + 1 < policies.size(); ++p) {
        const auto eff = weakly_more_effective(policies[p + 1], policies[p]);
        if (eff != Effectiveness::FirstMoreEffective && eff != Effectiveness::Equal)
            throw Error("analysis.policies",
                        "policy list must be ordered by weakly increasing effectiveness");
    }
    const NativeOrder native(priority);
    MonotonicityVerdict v;
    v.counts.assign(policies.size(), std::vector<int>(caps.size(), 0));
    for (std::size_t p = 0; p < policies.size(); ++p)
        for (std::size_t k = 0; k < caps.size(); ++k) {
            if (caps[k] > branch_total) throw Error("analysis.caps", "cap exceeds branch total");
            BranchQuota q{branch_total, caps[k]};
            v.counts[p][k] =
                count_increased(bradso_choice_rule(q, native, policies[p], pool));
        }
    for (std::size_t p = 0; p < policies.size() && v.holds; ++p)
        for (std::size_t k = 0; k + 1 < caps.size() && v.holds; ++k)
            if (v.counts[p][k] > v.counts[p][k + 1]) {
                v.holds = false;
                v.violation = "increased-contract count drops from cap " +
                              std::to_string(caps[k]) + " to " + std::to_string(caps[k + 1]) +
                              " under policy " + std::to_string(p);
            }
    for (std::size_t k = 0; k < caps.size() && v.holds; ++k)
        for (std::size_t p = 0; p + 1 < policies.size() && v.holds; ++p)
            if (v.counts[p][k] > v.counts[p + 1][k]) {
                v.holds = false;
                v.violation = "increased-contract count drops from policy " + std::to_string(p) +
                              " to " + std::to_string(p + 1) + " at cap " + std::to_string(caps[k]);
            }
    return v;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class PolicyVariant { Ultimate, Tier2020, Tier2021, Custom };

inline const char* to_string(PolicyVariant v) {
    switch (v) {
        case PolicyVariant::Ultimate: return "ultimate";
        case PolicyVariant::Tier2020: return "tier2020";
        case PolicyVariant::Tier2021: return "tier2021";
        case PolicyVariant::Custom: return "custom";
    }
    return "?";
}

struct PolicyChoice {
    PolicyVariant variant = PolicyVariant::Ultimate;
    std::vector<BradsoPolicy> custom;  // one per branch, for Custom only
};

struct SweepGrid {
    std::vector<double> cap_fractions;  // applied per branch: cap = floor(fraction * total)
    std::vector<PolicyChoice> policies;
};

struct SweepRow {
    double cap_fraction = 0;
    std::string policy;
    std::optional<BranchId> branch;  // absent = aggregate over all branches
    int bradso_charged = 0;
    int detectable_priority_reversals = 0;
    int priority_reversals = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ordered by (cap, policy, branch, aggregate last)
    std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<BradsoPolicy> build_policies(const Economy& econ, const PolicyChoice& choice,
                                                const std::vector<TierAssignment>& tiers) {
    std::vector<BradsoPolicy> out;
    out.reserve(econ.num_branches());
    for (int b = 0; b < econ.num_branches(); ++b) {
        const auto& pi = econ.priority(BranchId{b});
        switch (choice.variant) {
            case PolicyVariant::Ultimate:
                out.push_back(ultimate_policy(pi));
                break;
            case PolicyVariant::Tier2020:
            case PolicyVariant::Tier2021: {
                if (static_cast<int>(tiers.size()) != econ.num_branches())
                    throw Error("sweep.tiers", "tiered policy variants require tier assignments");
                const auto variant = choice.variant == PolicyVariant::Tier2020
                                         ? TieredVariant::Tier2020
                                         : TieredVariant::Tier2021;
                out.push_back(tiered_policy(pi, tiers[b], variant));
                break;
            }
            case PolicyVariant::Custom:
                if (static_cast<int>(choice.custom.size()) != econ.num_branches())
                    throw Error("sweep.custom", "custom policy sweep needs one policy per branch");
                out.push_back(choice.custom[b]);
                break;
        }
    }
    return out;
}

template <class F>
inline void parallel_for(int count, F&& f) {
    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), count));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::future<void>> futs;
    for (unsigned w = 0; w < workers; ++w)
        futs.push_back(std::async(std::launch::async, [&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) f(i);
        }));
    for (auto& fu : futs) fu.get();
}

}  // namespace detail

// Re-runs the cumulative offer mechanism over every (cap fraction, policy)
// cell, holding each branch's total fixed and varying the split between
// base-only and BRADSO-eligible positions. Cells run in parallel; rows are
// emitted in grid order regardless of scheduling.
inline SweepResult sweep(const Economy& econ, const std::vector<ContractPreference>& prefs,
                         const SweepGrid& grid, const std::vector<TierAssignment>& tiers = {}) {
    for (double f : grid.cap_fractions)
        if (f < 0.0 || f > 1.0) throw Error("sweep.fraction", "cap fractions must lie in [0,1]");
    const auto strategies = project_truthful(prefs);
    const int cells = static_cast<int>(grid.cap_fractions.size() * grid.policies.size());
    std::vector<std::vector<SweepRow>> cell_rows(cells);
    SweepResult result;

    detail::parallel_for(cells, [&](int cell) {
        const double fraction = grid.cap_fractions[cell / grid.policies.size()];
        const auto& choice = grid.policies[cell % grid.policies.size()];
        std::vector<BranchQuota> quotas;
        for (int b = 0; b < econ.num_branches(); ++b) {
            const int total = econ.quota(BranchId{b}).total;
            int cap = static_cast<int>(fraction * total);
            if (cap > total) cap = total;  // floor keeps this unreachable for fractions <= 1
            quotas.push_back({total, cap});
        }
        const Economy cell_econ =
            econ.with_quotas(std::move(quotas))
                .with_policies(detail::build_policies(econ, choice, tiers));
        const Allocation alloc = com_bradso(cell_econ, prefs).first;
        const auto detectable = check_detectable_priority_reversals(cell_econ, strategies, alloc);
        const auto reversals = check_priority_reversals(cell_econ, prefs, alloc);
        auto branch_count = [&](const AxiomReport& r, int b) {
            int c = 0;
            for (const auto& w : r.witnesses)
                if (w.branch && w.branch->v == b) ++c;
            return c;
        };
        std::vector<int> charged(econ.num_branches(), 0);
        for (const auto& x : alloc.contracts())
            if (x.cost == Cost::Increased) ++charged[x.branch.v];
        std::vector<SweepRow> rows;
        const std::string policy_name =
            choice.variant == PolicyVariant::Custom ? "custom" : to_string(choice.variant);
        for (int b = 0; b < econ.num_branches(); ++b)
            rows.push_back({fraction, policy_name, BranchId{b}, charged[b],
                            branch_count(detectable, b), branch_count(reversals, b)});
        rows.push_back({fraction, policy_name, std::nullopt,
                        static_cast<int>(std::accumulate(charged.begin(), charged.end(), 0)),
                        static_cast<int>(detectable.witnesses.size()),
                        static_cast<int>(reversals.witnesses.size())});
        cell_rows[cell] = std::move(rows);
    });
    for (auto& rows : cell_rows)
        result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    return result;
}

// ---------------------------------------------------------------------------
// Regime simulation

enum class Regime { USMA2006, USMA2020, COMBRADSO };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::USMA2006: return "usma2006";
        case Regime::USMA2020: return "usma2020";
        case Regime::COMBRADSO: return "com-bradso";
    }
    return "?";
}

struct RegimeResult {
    Allocation allocation;
    MechanismTrace trace;
    MetricsSummary metrics;
};

// Runs a regime on ground-truth contract preferences: quasi-direct regimes
// receive the truthful projection and report counterfactual metrics; the
// cumulative offer regime takes the preferences directly.
inline RegimeResult simulate_regime(const Economy& econ,
                                    const std::vector<ContractPreference>& prefs, Regime regime) {
    RegimeResult r;
    const auto strategies = project_truthful(prefs);
    switch (regime) {
        case Regime::USMA2006: {
            auto [alloc, trace] = usma2006(econ, strategies);
            const auto mech = usma2006_mechanism();
            r.metrics = compute_metrics(econ, alloc, &mech, &strategies, &prefs);
            r.allocation = std::move(alloc);
            r.trace = std::move(trace);
            break;
        }
        case Regime::USMA2020: {
            auto [alloc, trace] = usma2020(econ, strategies);
            const auto mech = usma2020_mechanism();
            r.metrics = compute_metrics(econ, alloc, &mech, &strategies, &prefs);
            r.allocation = std::move(alloc);
            r.trace = std::move(trace);
            break;
        }
        case Regime::COMBRADSO: {
            auto [alloc, trace] = com_bradso(econ, prefs);
            r.metrics = compute_metrics(econ, alloc, nullptr, &strategies, &prefs);
            r.allocation = std::move(alloc);
            r.trace = std::move(trace);
            break;
        }
    }
    return r;
}

}  // namespace cbm
