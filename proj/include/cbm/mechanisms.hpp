// Allocation mechanisms: OML serial dictatorship, cadet-proposing deferred
// acceptance, the USMA-2006 and USMA-2020 quasi-direct mechanisms, the
// single-branch direct mechanism, the branch choice rule over viable
// contract pools, and the cumulative offer mechanism built on it.
#pragma once

#include <cassert>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cbm/core.hpp"
#include "cbm/policies.hpp"

namespace cbm {

// ---------------------------------------------------------------------------
// Traces

enum class TraceEvent : std::uint8_t { Propose, Hold, Reject, CostCharge };

struct TraceEntry {
    int step = 0;
    TraceEvent event = TraceEvent::Propose;
    CadetId cadet;
    BranchId branch;
    std::optional<Cost> cost;
};

// Ordered event log of a mechanism run. Replaying the hold/reject deltas and
// applying the final cost charges reproduces the allocation exactly.
struct MechanismTrace {
    std::vector<TraceEntry> entries;

    Allocation replay() const {
        std::vector<Contract> held;
        for (const auto& e : entries) {
            switch (e.event) {
                case TraceEvent::Propose:
                    break;
                case TraceEvent::Hold:
                    held.push_back({e.cadet, e.branch, e.cost.value_or(Cost::Base)});
                    break;
                case TraceEvent::Reject:
                    std::erase_if(held, [&](const Contract& x) {
                        return x.cadet == e.cadet && x.branch == e.branch &&
                               (!e.cost || x.cost == *e.cost);
                    });
                    break;
                case TraceEvent::CostCharge:
                    for (auto& x : held)
                        if (x.cadet == e.cadet && x.branch == e.branch) x.cost = *e.cost;
                    break;
            }
        }
        return Allocation::from_contracts(std::move(held));
    }
};

// ---------------------------------------------------------------------------
// Adjusted priorities

// Priority order on cadets obtained by merging the baseline priority with a
// BRADSO policy given per-cadet willingness: each cadet is placed by the
// policy rank of her signal pair, the increased-cost pair when willing and
// the base-cost pair otherwise. Cadets with equal willingness end up in
// baseline order; mixed pairs are ordered by the policy.
inline BaselinePriority adjusted_priority(const BaselinePriority& pi, const BradsoPolicy& policy,
                                          const std::vector<bool>& willing) {
    const int n = pi.num_cadets();
    if (static_cast<int>(willing.size()) != n)
        throw Error("adjusted.shape", "willingness vector must cover every cadet");
    std::vector<CadetId> order(n);
    for (int i = 0; i < n; ++i) order[i] = CadetId{i};
    std::sort(order.begin(), order.end(), [&](CadetId a, CadetId b) {
        const Cost ta = willing[a.v] ? Cost::Increased : Cost::Base;
        const Cost tb = willing[b.v] ? Cost::Increased : Cost::Base;
        return policy.rank(a, ta) < policy.rank(b, tb);
    });
    return BaselinePriority::from_order(pi.branch(), order);
}

// ---------------------------------------------------------------------------
// Serial dictatorship

// Greedy assignment in OML order: each cadet takes her most preferred branch
// with remaining capacity, at the base cost.
inline Allocation serial_dictatorship(const Economy& econ,
                                      const std::vector<std::vector<BranchId>>& prefs) {
    if (static_cast<int>(prefs.size()) != econ.num_cadets())
        throw Error("mechanism.shape", "one branch preference list per cadet required");
    std::vector<int> used(econ.num_branches(), 0);
    std::vector<Contract> out;
    for (int i = 0; i < econ.num_cadets(); ++i) {
        for (BranchId b : prefs[i]) {
            if (used[b.v] < econ.quota(b).total) {
                ++used[b.v];
                out.push_back({CadetId{i}, b, Cost::Base});
                break;
            }
        }
    }
    return Allocation::from_contracts(std::move(out));
}

// ---------------------------------------------------------------------------
// Deferred acceptance

// Cadet-proposing deferred acceptance over branch-only preferences. Each free
// cadet applies down her list; a branch keeps the highest-priority applicants
// up to its total capacity and permanently rejects the rest.
inline std::vector<std::optional<BranchId>> deferred_acceptance(
    const std::vector<std::vector<BranchId>>& prefs,
    const std::vector<BaselinePriority>& priorities, const std::vector<int>& totals,
    MechanismTrace* trace = nullptr) {
    const int n = static_cast<int>(prefs.size());
    const int m = static_cast<int>(totals.size());
    std::vector<int> cursor(n, 0);
    std::vector<std::vector<CadetId>> held(m);
    std::deque<CadetId> free;
    for (int i = 0; i < n; ++i) free.push_back(CadetId{i});
    int step = 0;
    auto log = [&](TraceEvent ev, CadetId i, BranchId b, std::optional<Cost> c = std::nullopt) {
        if (trace) trace->entries.push_back({step, ev, i, b, c});
    };
    while (!free.empty()) {
        const CadetId i = free.front();
        free.pop_front();
        if (cursor[i.v] >= static_cast<int>(prefs[i.v].size())) continue;  // stays unmatched
        ++step;
        const BranchId b = prefs[i.v][cursor[i.v]++];
        log(TraceEvent::Propose, i, b);
        held[b.v].push_back(i);
        log(TraceEvent::Hold, i, b, Cost::Base);
        if (static_cast<int>(held[b.v].size()) > totals[b.v]) {
            auto worst = std::max_element(held[b.v].begin(), held[b.v].end(),
                                          [&](CadetId x, CadetId y) {
                                              return priorities[b.v].rank(x) < priorities[b.v].rank(y);
                                          });
            const CadetId rejected = *worst;
            held[b.v].erase(worst);
            log(TraceEvent::Reject, rejected, b);
            free.push_back(rejected);
        }
    }
    std::vector<std::optional<BranchId>> mu(n);
    for (int b = 0; b < m; ++b)
        for (CadetId i : held[b]) mu[i.v] = BranchId{b};
    return mu;
}

// ---------------------------------------------------------------------------
// USMA-2020

namespace detail {

inline std::vector<std::vector<BranchId>> branch_orders(const std::vector<QuasiStrategy>& s) {
    std::vector<std::vector<BranchId>> p;
    p.reserve(s.size());
    for (const auto& q : s) p.push_back(q.branch_order());
    return p;
}

}  // namespace detail

// Quasi-direct mechanism of the 2020 reform: branch assignments come from
// deferred acceptance under per-branch adjusted priorities, and the increased
// cost is then charged to willing assignees in reverse baseline-priority
// order up to the branch's cap. The charging is cross-checked against the
// defining cardinality rule: a willing cadet pays the increased cost exactly
// when fewer than the cap's worth of willing assignees sit below her.
inline std::pair<Allocation, MechanismTrace> usma2020(const Economy& econ,
                                                      const std::vector<QuasiStrategy>& strategies) {
    const int n = econ.num_cadets();
    if (static_cast<int>(strategies.size()) != n)
        throw Error("mechanism.shape", "one strategy per cadet required");
    std::vector<BaselinePriority> adjusted;
    adjusted.reserve(econ.num_branches());
    std::vector<int> totals(econ.num_branches());
    for (int b = 0; b < econ.num_branches(); ++b) {
        std::vector<bool> willing(n);
        for (int i = 0; i < n; ++i) willing[i] = strategies[i].willing(BranchId{b});
        adjusted.push_back(adjusted_priority(econ.priority(BranchId{b}), econ.policy(BranchId{b}),
                                             willing));
        totals[b] = econ.quota(BranchId{b}).total;
    }
    MechanismTrace trace;
    const auto mu = deferred_acceptance(detail::branch_orders(strategies), adjusted, totals, &trace);

    std::vector<Contract> out;
    const int final_step = trace.entries.empty() ? 0 : trace.entries.back().step;
    for (int b = 0; b < econ.num_branches(); ++b) {
        const BranchId branch{b};
        const auto& pi = econ.priority(branch);
        std::vector<CadetId> assigned, willing_assigned;
        for (int i = 0; i < n; ++i) {
            if (mu[i] != std::optional<BranchId>(branch)) continue;
            assigned.push_back(CadetId{i});
            if (strategies[i].willing(branch)) willing_assigned.push_back(CadetId{i});
        }
        // Reverse-priority charging: the cap's worth of lowest-priority
        // willing assignees pay the increased cost.
        std::sort(willing_assigned.begin(), willing_assigned.end(),
                  [&](CadetId x, CadetId y) { return pi.rank(x) > pi.rank(y); });
        const int charged =
            std::min<int>(econ.quota(branch).bradso_cap, static_cast<int>(willing_assigned.size()));
        std::vector<bool> pays(n, false);
        for (int k = 0; k < charged; ++k) pays[willing_assigned[k].v] = true;
        for (CadetId i : assigned) {
            // Literal charging rule, asserted equivalent.
            bool literal = false;
            if (strategies[i.v].willing(branch)) {
                int lower_willing = 0;
                for (CadetId j : willing_assigned)
                    if (pi.higher(i, j)) ++lower_willing;
                literal = lower_willing < econ.quota(branch).bradso_cap;
            }
            assert(literal == pays[i.v]);
            const Cost cost = pays[i.v] ? Cost::Increased : Cost::Base;
            out.push_back({i, branch, cost});
            trace.entries.push_back({final_step, TraceEvent::CostCharge, i, branch, cost});
        }
    }
    return {Allocation::from_contracts(std::move(out)), std::move(trace)};
}

// ---------------------------------------------------------------------------
// USMA-2006

// Quasi-direct mechanism of the 2006 BRADSO reform. Defined only for the
// merit-based regime: every branch's baseline priority is the common OML and
// every policy is the ultimate policy. At each step the highest-OML unheld
// cadet applies down her list; the branch re-computes its holds from scratch,
// filling primary positions by OML and BRADSO-eligible positions by the
// OML adjusted for willingness. Holders of BRADSO-eligible positions are
// charged the increased cost exactly when they declared willingness.
inline std::pair<Allocation, MechanismTrace> usma2006(const Economy& econ,
                                                      const std::vector<QuasiStrategy>& strategies) {
    const int n = econ.num_cadets();
    const int m = econ.num_branches();
    if (static_cast<int>(strategies.size()) != n)
        throw Error("mechanism.shape", "one strategy per cadet required");
    const BaselinePriority oml = econ.oml();
    for (int b = 0; b < m; ++b) {
        const BranchId branch{b};
        for (int i = 0; i < n; ++i)
            if (econ.priority(branch).rank(CadetId{i}) != oml.rank(CadetId{i}))
                throw Error("mechanism.regime",
                            "usma2006 requires the common OML priority at every branch");
        if (!(econ.policy(branch) == ultimate_policy(econ.priority(branch))))
            throw Error("mechanism.regime", "usma2006 requires the ultimate policy at every branch");
    }
    std::vector<BaselinePriority> adjusted;
    adjusted.reserve(m);
    for (int b = 0; b < m; ++b) {
        std::vector<bool> willing(n);
        for (int i = 0; i < n; ++i) willing[i] = strategies[i].willing(BranchId{b});
        adjusted.push_back(adjusted_priority(econ.priority(BranchId{b}), econ.policy(BranchId{b}),
                                             willing));
    }

    MechanismTrace trace;
    std::vector<std::vector<CadetId>> primary(m), bradso(m);
    std::vector<std::vector<bool>> rejected(n, std::vector<bool>(m, false));
    std::vector<bool> held(n, false);
    int step = 0;
    while (true) {
        // Highest-OML unheld cadet with an acceptable branch that has not
        // rejected her.
        CadetId proposer{-1};
        BranchId target{-1};
        for (int i = 0; i < n && proposer.v < 0; ++i) {
            if (held[i]) continue;
            for (BranchId b : strategies[i].branch_order()) {
                if (!rejected[i][b.v]) {
                    proposer = CadetId{i};
                    target = b;
                    break;
                }
            }
        }
        if (proposer.v < 0) break;
        ++step;
        trace.entries.push_back({step, TraceEvent::Propose, proposer, target});

        std::vector<CadetId> applicants = primary[target.v];
        applicants.insert(applicants.end(), bradso[target.v].begin(), bradso[target.v].end());
        applicants.push_back(proposer);

        // Primary positions by OML, then BRADSO-eligible positions by the
        // adjusted order among the remaining applicants.
        std::sort(applicants.begin(), applicants.end(),
                  [&](CadetId x, CadetId y) { return oml.rank(x) < oml.rank(y); });
        const int q0 = econ.quota(target).base_only();
        const int qp = econ.quota(target).bradso_cap;
        std::vector<CadetId> new_primary(applicants.begin(),
                                         applicants.begin() + std::min<int>(q0, applicants.size()));
        std::vector<CadetId> rest(applicants.begin() + new_primary.size(), applicants.end());
        std::sort(rest.begin(), rest.end(), [&](CadetId x, CadetId y) {
            return adjusted[target.v].rank(x) < adjusted[target.v].rank(y);
        });
        std::vector<CadetId> new_bradso(rest.begin(),
                                        rest.begin() + std::min<int>(qp, rest.size()));

        auto holds = [&](CadetId i) {
            return std::find(new_primary.begin(), new_primary.end(), i) != new_primary.end() ||
                   std::find(new_bradso.begin(), new_bradso.end(), i) != new_bradso.end();
        };
        for (CadetId i : applicants) {
            if (!holds(i)) {
                rejected[i.v][target.v] = true;
                held[i.v] = false;
                trace.entries.push_back({step, TraceEvent::Reject, i, target});
            } else if (!held[i.v]) {
                held[i.v] = true;
                trace.entries.push_back({step, TraceEvent::Hold, i, target, Cost::Base});
            }
        }
        primary[target.v] = std::move(new_primary);
        bradso[target.v] = std::move(new_bradso);
    }

    std::vector<Contract> out;
    for (int b = 0; b < m; ++b) {
        const BranchId branch{b};
        for (CadetId i : primary[b]) out.push_back({i, branch, Cost::Base});
        for (CadetId i : bradso[b]) {
            const Cost cost = strategies[i.v].willing(branch) ? Cost::Increased : Cost::Base;
            out.push_back({i, branch, cost});
            trace.entries.push_back({step, TraceEvent::CostCharge, i, branch, cost});
        }
    }
    return {Allocation::from_contracts(std::move(out)), std::move(trace)};
}

// ---------------------------------------------------------------------------
// Single-branch direct mechanism

// Direct mechanism for a one-branch economy. The base-only positions go to
// the highest-priority interested cadets. An iterative pass then decides how
// many BRADSO-eligible positions are awarded at the increased cost: starting
// from the outside volunteers, it keeps raising the count while enough
// volunteers' increased-cost pairs outrank the base-cost pair of the next
// tentatively seated cadet. The final count of increased-cost positions goes
// to the highest-priority volunteers, the surviving tentative holders keep
// the base cost, and everyone else is unmatched.
inline Allocation single_branch_bradso(const Economy& econ,
                                       const std::vector<ContractPreference>& prefs) {
    if (econ.num_branches() != 1)
        throw Error("mechanism.single_branch", "this mechanism requires exactly one branch");
    const BranchId b{0};
    const int n = econ.num_cadets();
    if (static_cast<int>(prefs.size()) != n)
        throw Error("mechanism.shape", "one preference per cadet required");
    const auto& pi = econ.priority(b);
    const auto& policy = econ.policy(b);

    // Cadets for whom the branch is acceptable at the base cost, in priority
    // order. Cadets with nothing acceptable never participate.
    std::vector<CadetId> interested;
    for (int r = 0; r < n; ++r) {
        const CadetId i = pi.at_rank(r);
        if (prefs[i.v].accepts(b, Cost::Base)) interested.push_back(i);
    }
    const int q0 = econ.quota(b).base_only();
    const int qp = econ.quota(b).bradso_cap;

    const int n0 = std::min<int>(q0, interested.size());
    std::vector<CadetId> finalized_base(interested.begin(), interested.begin() + n0);
    const int n1 = std::min<int>(qp, interested.size() - n0);
    std::vector<CadetId> tentative(interested.begin() + n0, interested.begin() + n0 + n1);

    auto accepts_increased = [&](CadetId i) { return prefs[i.v].accepts(b, Cost::Increased); };

    // Outside volunteers, then the tentative holders joined from the bottom.
    std::vector<CadetId> volunteers;  // J, in any order
    for (std::size_t k = n0 + n1; k < interested.size(); ++k)
        if (accepts_increased(interested[k])) volunteers.push_back(interested[k]);

    int increased_count = 0;
    if (n1 > 0) {
        auto boosted_past = [&](const std::vector<CadetId>& pool, CadetId seat) {
            int c = 0;
            for (CadetId j : pool)
                if (policy.higher(j, Cost::Increased, seat, Cost::Base)) ++c;
            return c;
        };
        // tentative is in priority order; seat l (1-based from the bottom) is
        // tentative[n1 - l].
        if (boosted_past(volunteers, tentative[n1 - 1]) > 0) {
            for (int l = 1; l <= n1; ++l) {
                const CadetId seat = tentative[n1 - l];
                if (accepts_increased(seat)) volunteers.push_back(seat);
                if (l == n1) {
                    // All BRADSO-eligible positions contested; no higher seat
                    // to compare against.
                    increased_count = l;
                    break;
                }
                if (boosted_past(volunteers, tentative[n1 - l - 1]) <= l) {
                    increased_count = l;
                    break;
                }
            }
        }
    }

    std::vector<Contract> out;
    for (CadetId i : finalized_base) out.push_back({i, b, Cost::Base});
    // Surviving tentative holders keep the base cost.
    for (int k = 0; k < n1 - increased_count; ++k) out.push_back({tentative[k], b, Cost::Base});
    // The increased-cost positions go to the highest-priority volunteers.
    std::sort(volunteers.begin(), volunteers.end(),
              [&](CadetId x, CadetId y) { return pi.rank(x) < pi.rank(y); });
    for (int k = 0; k < increased_count; ++k) out.push_back({volunteers[k], b, Cost::Increased});
    return Allocation::from_contracts(std::move(out));
}

// ---------------------------------------------------------------------------
// Branch choice rule

// Returns true when every increased-cost contract in the set comes with its
// base-cost version.
inline bool is_viable_pool(const std::vector<Contract>& pool) {
    for (const auto& x : pool) {
        if (x.cost != Cost::Increased) continue;
        bool base_present = false;
        for (const auto& y : pool)
            if (y.cadet == x.cadet && y.branch == x.branch && y.cost == Cost::Base)
                base_present = true;
        if (!base_present) return false;
    }
    return true;
}

// Two-step selection from a viable pool: base-only positions are filled by
// the native order, the remainder of the pool (excluding other contracts of
// already-seated cadets) competes for the BRADSO-eligible positions under
// the BRADSO policy. Small pools short-circuit to base-cost contracts only.
inline std::vector<Contract> bradso_choice_rule(const BranchQuota& quota,
                                                const NativeOrder& native,
                                                const BradsoPolicy& policy,
                                                std::vector<Contract> pool) {
    for (const auto& x : pool)
        if (x.branch != native.branch())
            throw Error("choice.branch_mismatch", "pool contains contracts of another branch");
    if (!is_viable_pool(pool))
        throw Error("choice.not_viable",
                    "pool has an increased-cost contract without its base-cost version");

    auto distinct_cadets = [](const std::vector<Contract>& xs) {
        std::vector<std::int32_t> ids;
        for (const auto& x : xs) ids.push_back(x.cadet.v);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return static_cast<int>(ids.size());
    };

    // Step 1.
    if (distinct_cadets(pool) < quota.base_only()) {
        std::vector<Contract> chosen;
        for (const auto& x : pool)
            if (x.cost == Cost::Base) chosen.push_back(x);
        return chosen;
    }
    std::sort(pool.begin(), pool.end(), [&](const Contract& x, const Contract& y) {
        return native.rank(x.cadet, x.cost) < native.rank(y.cadet, y.cost);
    });
    std::vector<Contract> first;
    std::vector<bool> seated;
    for (const auto& x : pool) {
        if (static_cast<int>(first.size()) == quota.base_only()) break;
        if (static_cast<std::size_t>(x.cadet.v) >= seated.size()) seated.resize(x.cadet.v + 1, false);
        if (seated[x.cadet.v]) continue;
        seated[x.cadet.v] = true;
        first.push_back(x);
        assert(x.cost == Cost::Base);  // viable pool + native order
    }

    // Step 2.
    std::vector<Contract> rest;
    for (const auto& x : pool) {
        if (static_cast<std::size_t>(x.cadet.v) < seated.size() && seated[x.cadet.v]) continue;
        rest.push_back(x);
    }
    if (distinct_cadets(rest) < quota.bradso_cap) {
        for (const auto& x : rest)
            if (x.cost == Cost::Base) first.push_back(x);
        return first;
    }
    std::sort(rest.begin(), rest.end(), [&](const Contract& x, const Contract& y) {
        return policy.rank(x.cadet, x.cost) < policy.rank(y.cadet, y.cost);
    });
    std::vector<bool> taken;
    int picked = 0;
    for (const auto& x : rest) {
        if (picked == quota.bradso_cap) break;
        if (static_cast<std::size_t>(x.cadet.v) >= taken.size()) taken.resize(x.cadet.v + 1, false);
        if (taken[x.cadet.v]) continue;
        taken[x.cadet.v] = true;
        first.push_back(x);
        ++picked;
    }
    return first;
}

// ---------------------------------------------------------------------------
// Cumulative offer mechanism

// Direct mechanism of the 2021 reform. Cadets propose acceptable contracts
// one at a time in a fixed order; the receiving branch re-applies its choice
// rule to the cumulative pool of everything ever proposed to it. The outcome
// is the union of held contracts at termination, and is independent of the
// proposal order.
inline std::pair<Allocation, MechanismTrace> com_bradso(
    const Economy& econ, const std::vector<ContractPreference>& prefs,
    const std::vector<CadetId>& proposal_order) {
    const int n = econ.num_cadets();
    const int m = econ.num_branches();
    if (static_cast<int>(prefs.size()) != n)
        throw Error("mechanism.shape", "one preference per cadet required");
    if (static_cast<int>(proposal_order.size()) != n)
        throw Error("mechanism.shape", "proposal order must cover every cadet");

    std::vector<NativeOrder> natives;
    natives.reserve(m);
    for (int b = 0; b < m; ++b) natives.emplace_back(econ.priority(BranchId{b}));

    std::vector<std::vector<Contract>> pool(m), held(m);
    std::vector<int> cursor(n, 0);
    std::vector<int> held_count(n, 0);
    MechanismTrace trace;
    int step = 0;

    while (true) {
        CadetId proposer{-1};
        for (CadetId i : proposal_order) {
            if (held_count[i.v] > 0) continue;
            if (cursor[i.v] < static_cast<int>(prefs[i.v].acceptable().size())) {
                proposer = i;
                break;
            }
        }
        if (proposer.v < 0) break;
        ++step;
        const auto [branch, cost] = prefs[proposer.v].acceptable()[cursor[proposer.v]++];
        trace.entries.push_back({step, TraceEvent::Propose, proposer, branch, cost});
        pool[branch.v].push_back({proposer, branch, cost});

        auto chosen = bradso_choice_rule(econ.quota(branch), natives[branch.v],
                                         econ.policy(branch), pool[branch.v]);
        std::sort(chosen.begin(), chosen.end());
        for (const auto& x : held[branch.v])
            if (!std::binary_search(chosen.begin(), chosen.end(), x)) {
                trace.entries.push_back({step, TraceEvent::Reject, x.cadet, x.branch, x.cost});
                --held_count[x.cadet.v];
            }
        for (const auto& x : chosen) {
            if (std::find(held[branch.v].begin(), held[branch.v].end(), x) == held[branch.v].end()) {
                trace.entries.push_back({step, TraceEvent::Hold, x.cadet, x.branch, x.cost});
                ++held_count[x.cadet.v];
            }
        }
        held[branch.v] = std::move(chosen);
        for (int i = 0; i < n; ++i) assert(held_count[i] <= 1);
    }

    std::vector<Contract> out;
    for (const auto& hs : held) out.insert(out.end(), hs.begin(), hs.end());
    return {Allocation::from_contracts(std::move(out)), std::move(trace)};
}

inline std::pair<Allocation, MechanismTrace> com_bradso(
    const Economy& econ, const std::vector<ContractPreference>& prefs) {
    std::vector<CadetId> order(econ.num_cadets());
    for (int i = 0; i < econ.num_cadets(); ++i) order[i] = CadetId{i};
    return com_bradso(econ, prefs, order);
}

// ---------------------------------------------------------------------------
// Mechanism handles for audits

// Re-runnable closures over an economy, used by the counterfactual axiom
// checkers so any mechanism gains the audits for free.
struct QuasiDirectMechanism {
    std::string name;
    std::function<Allocation(const Economy&, const std::vector<QuasiStrategy>&)> run;
};

struct DirectMechanism {
    std::string name;
    std::function<Allocation(const Economy&, const std::vector<ContractPreference>&)> run;
};

inline QuasiDirectMechanism usma2020_mechanism() {
    return {"usma2020", [](const Economy& e, const std::vector<QuasiStrategy>& s) {
                return usma2020(e, s).first;
            }};
}

inline QuasiDirectMechanism usma2006_mechanism() {
    return {"usma2006", [](const Economy& e, const std::vector<QuasiStrategy>& s) {
                return usma2006(e, s).first;
            }};
}

inline DirectMechanism com_bradso_mechanism() {
    return {"com-bradso", [](const Economy& e, const std::vector<ContractPreference>& p) {
                return com_bradso(e, p).first;
            }};
}

inline DirectMechanism single_branch_bradso_mechanism() {
    return {"single-branch-bradso",
            [](const Economy& e, const std::vector<ContractPreference>& p) {
                return single_branch_bradso(e, p);
            }};
}

// Interprets a single-branch quasi-direct mechanism as a direct one: a
// preference that finds the increased cost acceptable maps to declared
// willingness, and any preference is mapped to ranking the branch.
inline DirectMechanism as_single_branch_direct(QuasiDirectMechanism mech) {
    return {mech.name + ":single-branch-direct",
            [mech = std::move(mech)](const Economy& e, const std::vector<ContractPreference>& p) {
                if (e.num_branches() != 1)
                    throw Error("mechanism.single_branch",
                                "direct interpretation requires exactly one branch");
                std::vector<QuasiStrategy> s;
                s.reserve(p.size());
                for (int i = 0; i < e.num_cadets(); ++i) {
                    std::vector<BranchId> willing;
                    if (p[i].accepts(BranchId{0}, Cost::Increased)) willing.push_back(BranchId{0});
                    s.push_back(QuasiStrategy::make(CadetId{i}, {BranchId{0}}, std::move(willing)));
                }
                return mech.run(e, s);
            }};
}

}  // namespace cbm
