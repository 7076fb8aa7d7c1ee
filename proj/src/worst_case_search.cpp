#include "rmdp/worst_case_search.hpp"

#include "rmdp/errors.hpp"

#include <algorithm>

namespace rmdp {

PolicyEvaluator exact_evaluator(double tol) {
    if (!(tol > 0.0)) throw UsageError("exact evaluator: tol must be positive");
    return [tol](const DeterministicPolicy& policy, const TabularMdp& mdp) {
        const ValueFunction v = evaluate_policy_exact(mdp, policy, tol);
        return PolicyEvaluation{v[mdp.start_state()], 0.0};
    };
}

PolicyEvaluator monte_carlo_evaluator(std::size_t n_rollouts, std::size_t horizon,
                                      std::uint64_t seed) {
    if (n_rollouts == 0 || horizon == 0) {
        throw UsageError("Monte-Carlo evaluator: n_rollouts and horizon must be >= 1");
    }
    return [=](const DeterministicPolicy& policy, const TabularMdp& mdp) {
        const MonteCarloEstimate est = monte_carlo_return(mdp, policy, n_rollouts, horizon, seed);
        return PolicyEvaluation{est.mean, est.std_error};
    };
}

SearchOutcome grid_worst_case(const PolicyEvaluator& evaluator, const DeterministicPolicy& policy,
                              const DiscreteUncertaintySet& set) {
    if (set.empty()) throw UsageError("grid_worst_case: empty uncertainty set");
    SearchOutcome out;
    out.member_values.reserve(set.size());
    std::size_t best = 0;
    for (std::size_t j = 0; j < set.size(); ++j) {
        const PolicyEvaluation e = evaluator(policy, set.model(j));
        out.member_values.push_back(e.value);
        if (j == 0 || e.value < out.value) {
            out.value = e.value;
            out.std_error = e.std_error;
            best = j;
        }
    }
    out.index = best;
    out.parameter = set.parameter(best);
    out.model = set.model(best);
    out.evaluations = set.size();
    return out;
}

Parameter denormalize(std::span<const double> unit_point, const Parameter& lower,
                      const Parameter& upper) {
    if (unit_point.size() != lower.size() || lower.size() != upper.size()) {
        throw UsageError("denormalize: dimension mismatch");
    }
    Parameter p(unit_point.size());
    for (std::size_t d = 0; d < p.size(); ++d) {
        const double x = std::clamp(unit_point[d], 0.0, 1.0);
        p[d] = x >= 1.0 ? upper[d] : std::clamp(lower[d] + x * (upper[d] - lower[d]), lower[d], upper[d]);
    }
    return p;
}

SearchOutcome cmaes_worst_case(const PolicyEvaluator& evaluator, const DeterministicPolicy& policy,
                               const ModelFamily& family, const CmaesConfig& config) {
    if (!family.is_continuous()) {
        throw UsageError("cmaes_worst_case requires a continuous family");
    }
    const Parameter& lower = family.lower();
    const Parameter& upper = family.upper();
    auto objective = [&](std::span<const double> x) {
        return evaluator(policy, family.generate(denormalize(x, lower, upper))).value;
    };
    CmaesResult r = cmaes_minimize(objective, family.dimension(), config);

    SearchOutcome out;
    out.parameter = denormalize(r.best_point, lower, upper);
    out.model = family.generate(out.parameter);
    const PolicyEvaluation e = evaluator(policy, *out.model);
    out.value = e.value;
    out.std_error = e.std_error;
    out.evaluations = r.evaluations;
    out.history = std::move(r.history);
    return out;
}

}  // namespace rmdp
