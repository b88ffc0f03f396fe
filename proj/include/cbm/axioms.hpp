// Axiom auditors. Each checker is a finite scan (or a finite set of
// counterfactual re-runs) that is sound and complete for its quantified
// definition on a given instance, and produces re-checkable witnesses in a
// deterministic order: by cadet rank, then branch order.
#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cbm/core.hpp"
#include "cbm/mechanisms.hpp"

namespace cbm {

struct AxiomWitness {
    std::vector<CadetId> cadets;  // primary offended/offending cadets, in scan order
    std::optional<BranchId> branch;
    int clause = 0;  // for multi-clause axioms
    std::string explanation;
};

struct AxiomReport {
    std::string axiom;
    bool holds = true;
    std::vector<AxiomWitness> witnesses;
};

namespace detail {

inline std::string show(const Economy& econ, const MaybeAssignment& a) {
    if (!a) return "unmatched";
    return "(" + econ.branch_name(a->branch) + "," + to_string(a->cost) + ")";
}

inline void add_witness(AxiomReport& r, AxiomWitness w) {
    r.holds = false;
    r.witnesses.push_back(std::move(w));
}

}  // namespace detail

// No cadet's assignment may sit strictly below "unmatched" in her preference.
// Unmatched cadets satisfy this vacuously.
inline AxiomReport check_individual_rationality(const Economy& econ,
                                                const std::vector<ContractPreference>& prefs,
                                                const Allocation& alloc) {
    AxiomReport report{"individual-rationality"};
    const auto table = alloc.table(econ.num_cadets());
    for (int i = 0; i < econ.num_cadets(); ++i) {
        if (!prefs[i].prefers(std::nullopt, table[i])) continue;
        std::ostringstream os;
        os << "cadet " << econ.cadet_name(CadetId{i}) << " is assigned "
           << detail::show(econ, table[i]) << " which she ranks below remaining unmatched";
        detail::add_witness(report, {{CadetId{i}}, table[i]->branch, 0, os.str()});
    }
    return report;
}

// A branch may not have spare capacity while an unmatched cadet finds a
// base-cost position there acceptable.
inline AxiomReport check_non_wastefulness(const Economy& econ,
                                          const std::vector<ContractPreference>& prefs,
                                          const Allocation& alloc) {
    AxiomReport report{"non-wastefulness"};
    std::vector<int> filled(econ.num_branches(), 0);
    for (const auto& x : alloc.contracts()) ++filled[x.branch.v];
    const auto table = alloc.table(econ.num_cadets());
    for (int i = 0; i < econ.num_cadets(); ++i) {
        if (table[i].has_value()) continue;
        for (int b = 0; b < econ.num_branches(); ++b) {
            const BranchId branch{b};
            if (filled[b] >= econ.quota(branch).total) continue;
            if (!prefs[i].prefers(Assignment{branch, Cost::Base}, std::nullopt)) continue;
            std::ostringstream os;
            os << "branch " << econ.branch_name(branch) << " has " << filled[b] << " of "
               << econ.quota(branch).total << " positions filled while unmatched cadet "
               << econ.cadet_name(CadetId{i}) << " finds its base-cost position acceptable";
            detail::add_witness(report, {{CadetId{i}}, branch, 0, os.str()});
        }
    }
    return report;
}

// Whenever a cadet strictly prefers another cadet's assignment, the assigned
// cadet must hold the higher baseline priority at that branch.
inline AxiomReport check_priority_reversals(const Economy& econ,
                                            const std::vector<ContractPreference>& prefs,
                                            const Allocation& alloc) {
    AxiomReport report{"no-priority-reversals"};
    const auto table = alloc.table(econ.num_cadets());
    for (int i = 0; i < econ.num_cadets(); ++i) {
        for (int j = 0; j < econ.num_cadets(); ++j) {
            if (i == j || !table[j].has_value()) continue;
            const BranchId b = table[j]->branch;
            if (!prefs[i].prefers(table[j], table[i])) continue;
            if (!econ.priority(b).higher(CadetId{i}, CadetId{j})) continue;
            std::ostringstream os;
            os << "cadet " << econ.cadet_name(CadetId{i}) << " prefers "
               << detail::show(econ, table[j]) << " held by " << econ.cadet_name(CadetId{j})
               << " to her own " << detail::show(econ, table[i])
               << " despite higher baseline priority at " << econ.branch_name(b);
            detail::add_witness(report, {{CadetId{i}, CadetId{j}}, b, 0, os.str()});
        }
    }
    return report;
}

// Both halves of the BRADSO enforcement condition. Clause 1: an increased
// cost assignee displacing a base-cost demander must outrank her under the
// policy. Clause 2: unmet increased-cost demand with a policy boost over a
// seated base-cost cadet is only tolerated when the cap is exhausted.
inline AxiomReport check_bradso_enforcement(const Economy& econ,
                                            const std::vector<ContractPreference>& prefs,
                                            const Allocation& alloc) {
    AxiomReport report{"bradso-enforcement"};
    const auto table = alloc.table(econ.num_cadets());
    std::vector<int> increased(econ.num_branches(), 0);
    for (const auto& x : alloc.contracts())
        if (x.cost == Cost::Increased) ++increased[x.branch.v];
    for (int i = 0; i < econ.num_cadets(); ++i) {
        for (int j = 0; j < econ.num_cadets(); ++j) {
            if (i == j) continue;
            for (int bb = 0; bb < econ.num_branches(); ++bb) {
                const BranchId b{bb};
                const auto& policy = econ.policy(b);
                // Clause 1.
                if (table[i] == MaybeAssignment(Assignment{b, Cost::Increased}) &&
                    prefs[j].prefers(Assignment{b, Cost::Base}, table[j]) &&
                    !policy.higher(CadetId{i}, Cost::Increased, CadetId{j}, Cost::Base)) {
                    std::ostringstream os;
                    os << "cadet " << econ.cadet_name(CadetId{i})
                       << " holds an increased-cost position at " << econ.branch_name(b)
                       << " although the policy ranks the base-cost claim of "
                       << econ.cadet_name(CadetId{j}) << " (assigned "
                       << detail::show(econ, table[j]) << ") above it";
                    detail::add_witness(report, {{CadetId{i}, CadetId{j}}, b, 1, os.str()});
                }
                // Clause 2.
                if (table[j] == MaybeAssignment(Assignment{b, Cost::Base}) &&
                    prefs[i].prefers(Assignment{b, Cost::Increased}, table[i]) &&
                    policy.higher(CadetId{i}, Cost::Increased, CadetId{j}, Cost::Base) &&
                    increased[bb] != econ.quota(b).bradso_cap) {
                    std::ostringstream os;
                    os << "cadet " << econ.cadet_name(CadetId{i})
                       << " wants an increased-cost position at " << econ.branch_name(b)
                       << " and outranks the base-cost contract of "
                       << econ.cadet_name(CadetId{j}) << " under the policy, yet only "
                       << increased[bb] << " of " << econ.quota(b).bradso_cap
                       << " increased-cost positions are charged";
                    detail::add_witness(report, {{CadetId{i}, CadetId{j}}, b, 2, os.str()});
                }
            }
        }
    }
    return report;
}

// Weakening of the priority-reversal condition that is verifiable from
// quasi-direct strategies alone: a base-cost assignee must outrank, in
// baseline priority, every cadet who visibly ended up worse at that branch,
// either by paying the increased cost there or by landing strictly below it
// on her own submitted branch ranking.
inline AxiomReport check_detectable_priority_reversals(const Economy& econ,
                                                       const std::vector<QuasiStrategy>& strategies,
                                                       const Allocation& alloc) {
    AxiomReport report{"no-detectable-priority-reversals"};
    const auto table = alloc.table(econ.num_cadets());
    for (int i = 0; i < econ.num_cadets(); ++i) {
        for (int j = 0; j < econ.num_cadets(); ++j) {
            if (i == j || !table[j].has_value() || table[j]->cost != Cost::Base) continue;
            const BranchId b = table[j]->branch;
            const bool paid_there = table[i] == MaybeAssignment(Assignment{b, Cost::Increased});
            std::optional<BranchId> own;
            if (table[i].has_value()) own = table[i]->branch;
            const bool visibly_below =
                strategies[i].position(b) < strategies[i].position(own);
            if (!paid_there && !visibly_below) continue;
            if (!econ.priority(b).higher(CadetId{i}, CadetId{j})) continue;
            std::ostringstream os;
            os << "cadet " << econ.cadet_name(CadetId{j}) << " holds ("
               << econ.branch_name(b) << ",BASE) while higher-priority cadet "
               << econ.cadet_name(CadetId{i})
               << (paid_there ? " pays the increased cost there"
                              : " is assigned strictly below it on her submitted ranking");
            detail::add_witness(report, {{CadetId{i}, CadetId{j}}, b, 0, os.str()});
        }
    }
    return report;
}

// Counterfactual checker: a cadet charged the increased cost at a branch must
// not obtain the same branch at base cost by withdrawing her willingness.
inline AxiomReport check_bradso_ic(const QuasiDirectMechanism& mechanism, const Economy& econ,
                                   const std::vector<QuasiStrategy>& strategies) {
    AxiomReport report{"bradso-ic"};
    const auto table = mechanism.run(econ, strategies).table(econ.num_cadets());
    for (int i = 0; i < econ.num_cadets(); ++i) {
        if (!table[i].has_value() || table[i]->cost != Cost::Increased) continue;
        const BranchId b = table[i]->branch;
        auto counterfactual = strategies;
        counterfactual[i] = strategies[i].with_bradso_dropped(b);
        const auto rerun = mechanism.run(econ, counterfactual).table(econ.num_cadets());
        if (rerun[i] != MaybeAssignment(Assignment{b, Cost::Base})) continue;
        std::ostringstream os;
        os << "cadet " << econ.cadet_name(CadetId{i}) << " is charged the increased cost at "
           << econ.branch_name(b) << " but receives " << detail::show(econ, rerun[i])
           << " after withdrawing willingness for it";
        detail::add_witness(report, {{CadetId{i}}, b, 0, os.str()});
    }
    return report;
}

// Counterfactual checker: willingness must never be the sole enabler of a
// base-cost assignment; dropping it from a branch a cadet received at base
// cost must leave that assignment unchanged.
inline AxiomReport check_strategic_bradso(const QuasiDirectMechanism& mechanism,
                                          const Economy& econ,
                                          const std::vector<QuasiStrategy>& strategies) {
    AxiomReport report{"elimination-of-strategic-bradso"};
    const auto table = mechanism.run(econ, strategies).table(econ.num_cadets());
    for (int i = 0; i < econ.num_cadets(); ++i) {
        if (!table[i].has_value() || table[i]->cost != Cost::Base) continue;
        const BranchId b = table[i]->branch;
        if (!strategies[i].willing(b)) continue;
        auto counterfactual = strategies;
        counterfactual[i] = strategies[i].with_bradso_dropped(b);
        const auto rerun = mechanism.run(econ, counterfactual).table(econ.num_cadets());
        if (rerun[i] == MaybeAssignment(Assignment{b, Cost::Base})) continue;
        std::ostringstream os;
        os << "cadet " << econ.cadet_name(CadetId{i}) << " keeps (" << econ.branch_name(b)
           << ",BASE) only through declared willingness; withdrawing it yields "
           << detail::show(econ, rerun[i]);
        detail::add_witness(report, {{CadetId{i}}, b, 0, os.str()});
    }
    return report;
}

// All preference relations over the economy's branch-cost pairs in which a
// base-cost pair always precedes the same branch's increased-cost pair. Only
// the acceptable part is materialized; entries below the cutoff never affect
// a mechanism. Throws when the enumeration would exceed `limit`.
inline std::vector<ContractPreference> enumerate_preferences(const Economy& econ, CadetId cadet,
                                                             std::uint64_t limit) {
    std::vector<ContractPreference> out;
    std::vector<std::pair<BranchId, Cost>> prefix;
    std::vector<bool> used(2 * econ.num_branches(), false);
    auto key = [](BranchId b, Cost t) { return 2 * b.v + (t == Cost::Increased ? 1 : 0); };
    auto rec = [&](auto&& self) -> void {
        if (out.size() >= limit)
            throw Error("audit.budget", "preference enumeration exceeds the configured budget");
        out.push_back(ContractPreference::make(cadet, prefix));
        for (int b = 0; b < econ.num_branches(); ++b) {
            for (Cost t : {Cost::Base, Cost::Increased}) {
                if (used[key(BranchId{b}, t)]) continue;
                if (t == Cost::Increased && !used[key(BranchId{b}, Cost::Base)]) continue;
                used[key(BranchId{b}, t)] = true;
                prefix.emplace_back(BranchId{b}, t);
                self(self);
                prefix.pop_back();
                used[key(BranchId{b}, t)] = false;
            }
        }
    };
    rec(rec);
    return out;
}

// Exhaustive single-cadet deviation scan for a direct mechanism at the given
// profile: no misreport may yield an assignment the cadet strictly prefers
// under her submitted (true) preference.
inline AxiomReport check_strategy_proofness(const DirectMechanism& mechanism, const Economy& econ,
                                            const std::vector<ContractPreference>& prefs,
                                            std::uint64_t limit = (1u << 20)) {
    AxiomReport report{"strategy-proofness"};
    const auto table = mechanism.run(econ, prefs).table(econ.num_cadets());
    for (int i = 0; i < econ.num_cadets(); ++i) {
        const auto alternatives = enumerate_preferences(econ, CadetId{i}, limit);
        for (const auto& alt : alternatives) {
            if (alt.acceptable() == prefs[i].acceptable()) continue;
            auto misreport = prefs;
            misreport[i] = alt;
            const auto rerun = mechanism.run(econ, misreport).table(econ.num_cadets());
            if (!prefs[i].prefers(rerun[i], table[i])) continue;
            std::ostringstream os;
            os << "cadet " << econ.cadet_name(CadetId{i}) << " improves from "
               << detail::show(econ, table[i]) << " to " << detail::show(econ, rerun[i])
               << " by misreporting a " << alt.acceptable().size() << "-entry preference";
            detail::add_witness(report,
                                {{CadetId{i}},
                                 rerun[i] ? std::optional<BranchId>(rerun[i]->branch) : std::nullopt,
                                 0,
                                 os.str()});
        }
    }
    return report;
}

}  // namespace cbm
