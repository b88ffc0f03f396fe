// Strategic analysis of the single-branch willingness game induced by the
// USMA-2020 mechanism: exhaustive pure Nash equilibrium enumeration with an
// independent best-response verifier, and exact-rational Bayesian analysis
// for games with privately drawn utility types.
#pragma once

#include <array>
#include <boost/rational.hpp>
#include <cassert>
#include <cstdint>
#include <optional>
#include <vector>

#include "cbm/core.hpp"
#include "cbm/mechanisms.hpp"

namespace cbm {

using Rational = boost::rational<long long>;

// Complete-information game: every cadet ranks the single branch, strategies
// are the willingness signal {propose-branch, propose-nothing}, and the only
// preference variation is whether the increased cost beats staying unmatched.
struct SingleBranchGame {
    Economy econ;
    std::vector<bool> increased_acceptable;

    static SingleBranchGame make(Economy econ, std::vector<bool> increased_acceptable) {
        if (econ.num_branches() != 1)
            throw Error("game.single_branch", "the willingness game requires exactly one branch");
        if (static_cast<int>(increased_acceptable.size()) != econ.num_cadets())
            throw Error("game.shape", "one acceptability flag per cadet required");
        return {std::move(econ), std::move(increased_acceptable)};
    }

    // The profile of true contract preferences this game encodes.
    std::vector<ContractPreference> true_preferences() const {
        std::vector<ContractPreference> prefs;
        prefs.reserve(econ.num_cadets());
        for (int i = 0; i < econ.num_cadets(); ++i) {
            std::vector<std::pair<BranchId, Cost>> acc{{BranchId{0}, Cost::Base}};
            if (increased_acceptable[i]) acc.emplace_back(BranchId{0}, Cost::Increased);
            prefs.push_back(ContractPreference::make(CadetId{i}, std::move(acc)));
        }
        return prefs;
    }
};

using StrategyProfile = std::uint32_t;  // bit i set = cadet i proposes the branch

namespace detail {

inline std::vector<QuasiStrategy> profile_strategies(const Economy& econ, StrategyProfile mask) {
    std::vector<QuasiStrategy> s;
    s.reserve(econ.num_cadets());
    for (int i = 0; i < econ.num_cadets(); ++i) {
        std::vector<BranchId> willing;
        if (mask & (StrategyProfile{1} << i)) willing.push_back(BranchId{0});
        s.push_back(QuasiStrategy::make(CadetId{i}, {BranchId{0}}, std::move(willing)));
    }
    return s;
}

// Preference rank of an assignment for a cadet whose only question is whether
// the increased cost beats unmatched; lower is better.
inline int assignment_rank(const MaybeAssignment& a, bool increased_acceptable) {
    if (a && a->cost == Cost::Base) return 0;
    if (!a) return increased_acceptable ? 2 : 1;
    return increased_acceptable ? 1 : 3;
}

}  // namespace detail

// Closed-form outcome of the single-branch willingness game, independent of
// the deferred-acceptance implementation: seat the branch-capacity many
// highest cadets of the willingness-adjusted order, then charge the increased
// cost to any seated volunteer with fewer than the cap's worth of seated
// volunteers below her.
inline Allocation single_branch_closed_form(const Economy& econ, StrategyProfile mask) {
    const BranchId b{0};
    const int n = econ.num_cadets();
    const auto& pi = econ.priority(b);
    const auto& policy = econ.policy(b);
    std::vector<CadetId> order(n);
    for (int i = 0; i < n; ++i) order[i] = CadetId{i};
    std::sort(order.begin(), order.end(), [&](CadetId x, CadetId y) {
        const Cost tx = (mask >> x.v) & 1 ? Cost::Increased : Cost::Base;
        const Cost ty = (mask >> y.v) & 1 ? Cost::Increased : Cost::Base;
        return policy.rank(x, tx) < policy.rank(y, ty);
    });
    const int seats = std::min(econ.quota(b).total, n);
    std::vector<Contract> out;
    for (int k = 0; k < seats; ++k) {
        const CadetId i = order[k];
        Cost cost = Cost::Base;
        if ((mask >> i.v) & 1) {
            int lower_willing = 0;
            for (int l = 0; l < seats; ++l) {
                const CadetId j = order[l];
                if (((mask >> j.v) & 1) && pi.higher(i, j)) ++lower_willing;
            }
            if (lower_willing < econ.quota(b).bradso_cap) cost = Cost::Increased;
        }
        out.push_back({i, b, cost});
    }
    return Allocation::from_contracts(std::move(out));
}

struct NashEquilibrium {
    StrategyProfile profile = 0;
    Allocation outcome;
};

struct NashAnalysis {
    std::vector<NashEquilibrium> equilibria;   // by ascending profile mask
    std::vector<Allocation> distinct_outcomes;  // deduplicated equilibrium outcomes
};

// Nash: every profile without a strictly profitable unilateral flip.
// UndominatedNash keeps only equilibria whose strategies survive iterated
// elimination of weakly dominated strategies. The distinction matters: a
// cadet certain to stay unmatched can volunteer at no cost to herself and
// thereby force an extra charge onto a seated cadet. Such profiles are
// equilibria only through dominated (or iteratively dominated) volunteering,
// and the outcome-uniqueness property holds once they are filtered out.
enum class EquilibriumConcept { Nash, UndominatedNash };

// Exhaustive scan of all pure strategy profiles of the willingness game.
// Every reported equilibrium is re-verified through the closed-form outcome
// path, which is independent of the deferred-acceptance implementation.
inline NashAnalysis enumerate_nash(const SingleBranchGame& game,
                                   EquilibriumConcept solution = EquilibriumConcept::UndominatedNash,
                                   std::uint64_t budget = (1u << 20)) {
    const int n = game.econ.num_cadets();
    if (n >= 32 || (std::uint64_t{1} << n) > budget)
        throw Error("equilibrium.budget", "profile space exceeds the enumeration budget");
    const StrategyProfile count = StrategyProfile{1} << n;
    std::vector<std::vector<MaybeAssignment>> tables(count);
    std::vector<Allocation> outcomes(count);
    for (StrategyProfile mask = 0; mask < count; ++mask) {
        outcomes[mask] = usma2020(game.econ, detail::profile_strategies(game.econ, mask)).first;
        assert(outcomes[mask] == single_branch_closed_form(game.econ, mask));
        tables[mask] = outcomes[mask].table(n);
    }
    auto rank = [&](StrategyProfile mask, int i) {
        return detail::assignment_rank(tables[mask][i], game.increased_acceptable[i]);
    };
    // alive[i][a]: strategy a (0 = out, 1 = volunteer) of cadet i survives
    // iterated elimination of weakly dominated strategies. Each round removes
    // every strategy dominated against the opponents' surviving sets; rounds
    // repeat to a fixpoint.
    std::vector<std::array<bool, 2>> alive(n, {true, true});
    if (solution == EquilibriumConcept::UndominatedNash) {
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<std::array<bool, 2>> next = alive;
            for (int i = 0; i < n; ++i) {
                if (!alive[i][0] || !alive[i][1]) continue;
                bool volunteer_never_better = true, volunteer_sometimes_worse = false;
                bool out_never_better = true, out_sometimes_worse = false;
                const StrategyProfile bit = StrategyProfile{1} << i;
                for (StrategyProfile rest = 0; rest < count; ++rest) {
                    if (rest & bit) continue;
                    bool feasible = true;
                    for (int j = 0; j < n && feasible; ++j)
                        if (j != i && !alive[j][(rest >> j) & 1]) feasible = false;
                    if (!feasible) continue;
                    const int with = rank(rest | bit, i);
                    const int without = rank(rest, i);
                    if (with < without) volunteer_never_better = false;
                    if (with > without) volunteer_sometimes_worse = true;
                    if (without < with) out_never_better = false;
                    if (without > with) out_sometimes_worse = true;
                }
                if (volunteer_never_better && volunteer_sometimes_worse) {
                    next[i][1] = false;
                    changed = true;
                }
                if (out_never_better && out_sometimes_worse) {
                    next[i][0] = false;
                    changed = true;
                }
            }
            alive = next;
        }
    }
    NashAnalysis result;
    for (StrategyProfile mask = 0; mask < count; ++mask) {
        bool keep = true;
        for (int i = 0; i < n && keep; ++i) {
            const StrategyProfile flipped = mask ^ (StrategyProfile{1} << i);
            if (rank(flipped, i) < rank(mask, i)) keep = false;
            if (!alive[i][(mask >> i) & 1]) keep = false;
        }
        if (!keep) continue;
        // Independent re-verification through the closed form.
        for (int i = 0; i < n; ++i) {
            const StrategyProfile flipped = mask ^ (StrategyProfile{1} << i);
            const auto deviant = single_branch_closed_form(game.econ, flipped).table(n);
            const auto current = single_branch_closed_form(game.econ, mask).table(n);
            if (detail::assignment_rank(deviant[i], game.increased_acceptable[i]) <
                detail::assignment_rank(current[i], game.increased_acceptable[i]))
                throw Error("equilibrium.verification",
                            "closed-form verifier rejects a claimed equilibrium");
        }
        result.equilibria.push_back({mask, outcomes[mask]});
    }
    for (const auto& eq : result.equilibria) {
        bool seen = false;
        for (const auto& o : result.distinct_outcomes)
            if (o == eq.outcome) seen = true;
        if (!seen) result.distinct_outcomes.push_back(eq.outcome);
    }
    return result;
}

struct UniqueOutcomeVerdict {
    bool holds = false;
    NashAnalysis analysis;
    Allocation reference;  // the direct single-branch outcome under truth
};

// Checks that the willingness game has a unique undominated-equilibrium
// outcome equal to the truthful outcome of the direct single-branch
// mechanism.
inline UniqueOutcomeVerdict verify_unique_nash_outcome(const SingleBranchGame& game,
                                                       std::uint64_t budget = (1u << 20)) {
    UniqueOutcomeVerdict v;
    v.analysis = enumerate_nash(game, EquilibriumConcept::UndominatedNash, budget);
    v.reference = single_branch_bradso(game.econ, game.true_preferences());
    v.holds = v.analysis.distinct_outcomes.size() == 1 &&
              v.analysis.distinct_outcomes.front() == v.reference;
    return v;
}

// ---------------------------------------------------------------------------
// Bayesian analysis

// A privately known utility type over the three possible assignments.
struct CadetType {
    Rational probability;
    Rational u_base;
    Rational u_increased;
    Rational u_unmatched;
};

// Incomplete-information version of the willingness game: nature draws each
// cadet's type independently, then the USMA-2020 outcome is evaluated under
// the realized utilities. All arithmetic is exact.
struct BayesianGame {
    Economy econ;
    std::vector<std::vector<CadetType>> types;  // per cadet, in declared order

    static BayesianGame make(Economy econ, std::vector<std::vector<CadetType>> types) {
        if (econ.num_branches() != 1)
            throw Error("game.single_branch", "the Bayesian game requires exactly one branch");
        if (static_cast<int>(types.size()) != econ.num_cadets())
            throw Error("game.shape", "one type table per cadet required");
        for (const auto& table : types) {
            if (table.empty()) throw Error("game.shape", "every cadet needs at least one type");
            Rational sum{0};
            for (const auto& t : table) {
                if (t.probability < Rational{0})
                    throw Error("game.probability", "type probabilities must be non-negative");
                sum += t.probability;
            }
            if (sum != Rational{1})
                throw Error("game.probability", "type probabilities must sum to one");
        }
        return {std::move(econ), std::move(types)};
    }
};

// Pure decision rule: action (propose the branch or not) per cadet per type.
using StrategyRule = std::vector<std::vector<bool>>;

inline bool truthful_action(const CadetType& t) { return t.u_increased > t.u_unmatched; }

inline StrategyRule truthful_rule(const BayesianGame& game) {
    StrategyRule rule(game.types.size());
    for (std::size_t i = 0; i < game.types.size(); ++i)
        for (const auto& t : game.types[i]) rule[i].push_back(truthful_action(t));
    return rule;
}

// The contract preference a type's utilities induce; requires the base cost
// to beat the increased cost at the same branch.
inline ContractPreference preference_from_type(const Economy& econ, CadetId cadet,
                                               const CadetType& t) {
    if (!(t.u_base > t.u_increased))
        throw Error("game.utility",
                    "a type must strictly prefer the base cost to the increased cost");
    std::vector<std::pair<BranchId, Cost>> acc;
    if (t.u_base > t.u_unmatched) acc.emplace_back(BranchId{0}, Cost::Base);
    if (t.u_increased > t.u_unmatched) acc.emplace_back(BranchId{0}, Cost::Increased);
    return ContractPreference::make(cadet, std::move(acc));
}

namespace detail {

class OutcomeCache {
public:
    explicit OutcomeCache(const Economy& econ) : econ_(econ), tables_(std::size_t{1} << econ.num_cadets()) {}

    const std::vector<MaybeAssignment>& table(StrategyProfile mask) {
        auto& slot = tables_[mask];
        if (!slot)
            slot = usma2020(econ_, profile_strategies(econ_, mask)).first.table(econ_.num_cadets());
        return *slot;
    }

private:
    const Economy& econ_;
    std::vector<std::optional<std::vector<MaybeAssignment>>> tables_;
};

inline Rational utility_of(const CadetType& t, const MaybeAssignment& a) {
    if (!a) return t.u_unmatched;
    return a->cost == Cost::Base ? t.u_base : t.u_increased;
}

// Interim expected utility for cadet i of fixed type playing `action`, with
// everyone else following `rule`; expectation over the other cadets' types.
inline Rational interim_utility(const BayesianGame& game, OutcomeCache& cache,
                                const StrategyRule& rule, int cadet, const CadetType& type,
                                bool action) {
    const int n = game.econ.num_cadets();
    std::vector<std::size_t> idx(n, 0);
    Rational total{0};
    while (true) {
        Rational prob{1};
        StrategyProfile mask = action ? (StrategyProfile{1} << cadet) : 0;
        for (int j = 0; j < n; ++j) {
            if (j == cadet) continue;
            prob *= game.types[j][idx[j]].probability;
            if (rule[j][idx[j]]) mask |= StrategyProfile{1} << j;
        }
        if (prob != Rational{0}) total += prob * utility_of(type, cache.table(mask)[cadet]);
        int j = 0;
        for (; j < n; ++j) {
            if (j == cadet) continue;
            if (++idx[j] < game.types[j].size()) break;
            idx[j] = 0;
        }
        if (j == n) break;
    }
    return total;
}

}  // namespace detail

// Exact ex-ante expected utility of every cadet under a strategy rule.
inline std::vector<Rational> bayes_expected_utilities(const BayesianGame& game,
                                                      const StrategyRule& rule,
                                                      std::uint64_t budget = (1u << 20)) {
    const int n = game.econ.num_cadets();
    if (n >= 32 || (std::uint64_t{1} << n) > budget)
        throw Error("equilibrium.budget", "profile space exceeds the enumeration budget");
    std::uint64_t profiles = 1;
    for (const auto& t : game.types) {
        profiles *= t.size();
        if (profiles > budget)
            throw Error("equilibrium.budget", "type space exceeds the enumeration budget");
    }
    detail::OutcomeCache cache(game.econ);
    std::vector<Rational> eu(n, Rational{0});
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        Rational prob{1};
        StrategyProfile mask = 0;
        for (int j = 0; j < n; ++j) {
            prob *= game.types[j][idx[j]].probability;
            if (rule[j][idx[j]]) mask |= StrategyProfile{1} << j;
        }
        if (prob != Rational{0}) {
            const auto& table = cache.table(mask);
            for (int j = 0; j < n; ++j)
                eu[j] += prob * detail::utility_of(game.types[j][idx[j]], table[j]);
        }
        int j = 0;
        for (; j < n; ++j) {
            if (++idx[j] < game.types[j].size()) break;
            idx[j] = 0;
        }
        if (j == n) break;
    }
    return eu;
}

// Exhaustive scan over pure strategy rules. A rule is a Bayesian equilibrium
// when no cadet type with positive probability can raise its interim expected
// utility by switching its action. Rules are reported canonically: types with
// zero probability are mapped to their truthful action before deduplication.
inline std::vector<StrategyRule> find_bne(const BayesianGame& game,
                                          std::uint64_t budget = (1u << 20)) {
    const int n = game.econ.num_cadets();
    if (n >= 32 || (std::uint64_t{1} << n) > budget)
        throw Error("equilibrium.budget", "profile space exceeds the enumeration budget");
    std::uint64_t rule_count = 1;
    for (const auto& t : game.types) {
        if (t.size() >= 32) throw Error("equilibrium.budget", "too many types per cadet");
        rule_count *= std::uint64_t{1} << t.size();
        if (rule_count > budget)
            throw Error("equilibrium.budget", "rule space exceeds the enumeration budget");
    }
    detail::OutcomeCache cache(game.econ);
    std::vector<StrategyRule> found;
    std::vector<std::uint32_t> bits(n, 0);
    while (true) {
        StrategyRule rule(n);
        for (int j = 0; j < n; ++j)
            for (std::size_t t = 0; t < game.types[j].size(); ++t)
                rule[j].push_back((bits[j] >> t) & 1);
        bool bne = true;
        for (int i = 0; i < n && bne; ++i) {
            for (std::size_t t = 0; t < game.types[i].size() && bne; ++t) {
                const auto& type = game.types[i][t];
                if (type.probability == Rational{0}) continue;
                const bool action = rule[i][t];
                if (detail::interim_utility(game, cache, rule, i, type, !action) >
                    detail::interim_utility(game, cache, rule, i, type, action))
                    bne = false;
            }
        }
        if (bne) {
            for (int j = 0; j < n; ++j)
                for (std::size_t t = 0; t < game.types[j].size(); ++t)
                    if (game.types[j][t].probability == Rational{0})
                        rule[j][t] = truthful_action(game.types[j][t]);
            if (std::find(found.begin(), found.end(), rule) == found.end())
                found.push_back(std::move(rule));
        }
        int j = 0;
        for (; j < n; ++j) {
            if (++bits[j] < (std::uint32_t{1} << game.types[j].size())) break;
            bits[j] = 0;
        }
        if (j == n) break;
    }
    return found;
}

}  // namespace cbm
