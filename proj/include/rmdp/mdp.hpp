#pragma once

// Finite discounted MDPs with dense storage, standard dynamic programming and
// policy evaluation (exact and Monte-Carlo).

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace rmdp {

using StateIndex = std::size_t;
using ActionIndex = std::size_t;

/**
 * Finite MDP with transition and reward tensors indexed (s, a, s'), stored
 * row-major. Immutable once constructed; the constructor enforces
 *  - every row T(s, a, .) is a probability vector (sum within 1e-9 of 1),
 *  - absorbing states loop on themselves with probability 1 and zero reward,
 *  - start_state < n_states and discount in [0, 1).
 */
class TabularMdp {
public:
    static constexpr double kRowSumTolerance = 1e-9;

    TabularMdp(std::size_t n_states, std::size_t n_actions, std::vector<double> transition,
               std::vector<double> reward, double discount, StateIndex start_state,
               std::vector<bool> absorbing);

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }
    double discount() const noexcept { return discount_; }
    StateIndex start_state() const noexcept { return start_state_; }
    bool is_absorbing(StateIndex s) const { return absorbing_.at(s); }
    const std::vector<bool>& absorbing() const noexcept { return absorbing_; }

    std::span<const double> transition_row(StateIndex s, ActionIndex a) const {
        return {transition_.data() + row_offset(s, a), n_states_};
    }
    std::span<const double> reward_row(StateIndex s, ActionIndex a) const {
        return {reward_.data() + row_offset(s, a), n_states_};
    }
    double transition(StateIndex s, ActionIndex a, StateIndex next) const {
        return transition_[row_offset(s, a) + next];
    }
    double reward(StateIndex s, ActionIndex a, StateIndex next) const {
        return reward_[row_offset(s, a) + next];
    }

    /// sum_{s'} T(s,a,s') r(s,a,s'), cached at construction.
    double expected_reward(StateIndex s, ActionIndex a) const {
        return expected_reward_[s * n_actions_ + a];
    }

    const std::vector<double>& transition_data() const noexcept { return transition_; }
    const std::vector<double>& reward_data() const noexcept { return reward_; }

    /// Largest |r(s,a,s')| over reachable transitions.
    double max_abs_reward() const noexcept { return max_abs_reward_; }

    /// Same dimensions, discount, start state and absorbing flags.
    bool same_structure(const TabularMdp& other) const noexcept;

    /// Bit-identical comparison of every field.
    bool operator==(const TabularMdp& other) const;

private:
    std::size_t row_offset(StateIndex s, ActionIndex a) const noexcept {
        return (s * n_actions_ + a) * n_states_;
    }

    std::size_t n_states_;
    std::size_t n_actions_;
    std::vector<double> transition_;
    std::vector<double> reward_;
    std::vector<double> expected_reward_;
    double discount_;
    StateIndex start_state_;
    std::vector<bool> absorbing_;
    double max_abs_reward_ = 0.0;
};

class ValueFunction {
public:
    ValueFunction() = default;
    explicit ValueFunction(std::size_t n_states, double fill = 0.0) : values_(n_states, fill) {}
    explicit ValueFunction(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](StateIndex s) const { return values_[s]; }
    double& operator[](StateIndex s) { return values_[s]; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    bool operator==(const ValueFunction&) const = default;

private:
    std::vector<double> values_;
};

/// Dense (n_states x n_actions) table, row-major by state.
class QFunction {
public:
    QFunction() = default;
    QFunction(std::size_t n_states, std::size_t n_actions, double fill = 0.0)
        : n_states_(n_states), n_actions_(n_actions), values_(n_states * n_actions, fill) {}
    QFunction(std::size_t n_states, std::size_t n_actions, std::vector<double> values);

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }
    double operator()(StateIndex s, ActionIndex a) const { return values_[s * n_actions_ + a]; }
    double& operator()(StateIndex s, ActionIndex a) { return values_[s * n_actions_ + a]; }
    std::span<const double> row(StateIndex s) const {
        return {values_.data() + s * n_actions_, n_actions_};
    }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    bool operator==(const QFunction&) const = default;

private:
    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<double> values_;
};

class DeterministicPolicy {
public:
    DeterministicPolicy() = default;
    explicit DeterministicPolicy(std::vector<ActionIndex> actions) : actions_(std::move(actions)) {}

    std::size_t size() const noexcept { return actions_.size(); }
    ActionIndex operator[](StateIndex s) const { return actions_[s]; }
    std::span<const ActionIndex> actions() const noexcept { return actions_; }

    bool operator==(const DeterministicPolicy&) const = default;

private:
    std::vector<ActionIndex> actions_;
};

struct BackupResult {
    ValueFunction value;
    QFunction q;
};

struct ValueIterationResult {
    ValueFunction value;
    QFunction q;
    std::size_t iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Q(s,a) = sum_{s'} T(s,a,s') (r(s,a,s') + discount v(s')), V'(s) = max_a Q(s,a).
BackupResult bellman_backup(const ValueFunction& v, const TabularMdp& mdp);

/// Iterates bellman_backup from V = 0 until ||V_{n+1} - V_n||_inf <= tol.
/// On hitting max_iters the last iterate is returned with converged = false.
ValueIterationResult value_iteration(const TabularMdp& mdp, double tol, std::size_t max_iters);

/// 10 * ceil(log(tol) / log(discount)), at least 1.
std::size_t default_max_iterations(double tol, double discount);

/// Per-state argmax, lowest action index on ties.
DeterministicPolicy greedy_policy(const QFunction& q);

/// V^pi by iterating the policy backup from V = 0. Stops once the
/// a-posteriori bound discount/(1-discount) * residual is at most tol, so the
/// returned vector is within tol of the true V^pi (and its residual is <= tol).
ValueFunction evaluate_policy_exact(const TabularMdp& mdp, const DeterministicPolicy& policy,
                                    double tol);

/// Mean discounted return from the start state over n_rollouts trajectories,
/// each cut at an absorbing state or after `horizon` steps. Rollout k draws
/// from CounterRng::stream(seed, k), so the result does not depend on the
/// order rollouts are executed in.
MonteCarloEstimate monte_carlo_return(const TabularMdp& mdp, const DeterministicPolicy& policy,
                                      std::size_t n_rollouts, std::size_t horizon,
                                      std::uint64_t seed);

/// Discounted return of one trajectory; exposed for testing.
double rollout_return(const TabularMdp& mdp, const DeterministicPolicy& policy,
                      std::size_t horizon, std::uint64_t seed, std::uint64_t rollout_index);

}  // namespace rmdp
