#pragma once

// Black-box minimization of a policy's value over a model family.

#include "rmdp/cmaes.hpp"
#include "rmdp/mdp.hpp"
#include "rmdp/uncertainty.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

namespace rmdp {

struct PolicyEvaluation {
    double value = 0.0;
    /// Zero for deterministic evaluators.
    double std_error = 0.0;
};

/// Value of a policy at the model's start state.
using PolicyEvaluator =
    std::function<PolicyEvaluation(const DeterministicPolicy&, const TabularMdp&)>;

/// evaluate_policy_exact(...)[start_state].
PolicyEvaluator exact_evaluator(double tol = 1e-9);

/// monte_carlo_return with a fixed seed, so every model is scored on common
/// random numbers.
PolicyEvaluator monte_carlo_evaluator(std::size_t n_rollouts = 300, std::size_t horizon = 10'000,
                                      std::uint64_t seed = 0);

struct SearchOutcome {
    Parameter parameter;
    std::optional<TabularMdp> model;
    /// Index into the searched set for grid search; unset for CMA-ES.
    std::optional<std::size_t> index;
    double value = std::numeric_limits<double>::infinity();
    double std_error = 0.0;
    std::size_t evaluations = 0;
    /// Grid search: the evaluation of every member, in set order.
    std::vector<double> member_values;
    /// CMA-ES: per-generation history.
    std::vector<CmaesGeneration> history;
};

/// Exhaustive search: the member with the smallest value, lowest index on ties.
SearchOutcome grid_worst_case(const PolicyEvaluator& evaluator, const DeterministicPolicy& policy,
                              const DiscreteUncertaintySet& set);

/// CMA-ES over the family's box, searched in normalized [0,1]^d coordinates
/// and mapped back affinely.
SearchOutcome cmaes_worst_case(const PolicyEvaluator& evaluator, const DeterministicPolicy& policy,
                               const ModelFamily& family, const CmaesConfig& config);

/// lower + x (upper - lower), per dimension, with x clipped to [0,1].
Parameter denormalize(std::span<const double> unit_point, const Parameter& lower,
                      const Parameter& upper);

}  // namespace rmdp
