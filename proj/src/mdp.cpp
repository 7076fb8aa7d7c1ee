#include "rmdp/mdp.hpp"

#include "rmdp/errors.hpp"
#include "rmdp/rng.hpp"
#include "rmdp/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rmdp {

TabularMdp::TabularMdp(std::size_t n_states, std::size_t n_actions,
                       std::vector<double> transition, std::vector<double> reward,
                       double discount, StateIndex start_state, std::vector<bool> absorbing)
    : n_states_(n_states),
      n_actions_(n_actions),
      transition_(std::move(transition)),
      reward_(std::move(reward)),
      discount_(discount),
      start_state_(start_state),
      absorbing_(std::move(absorbing)) {
    if (n_states_ == 0 || n_actions_ == 0) {
        throw UsageError("MDP needs at least one state and one action");
    }
    const std::size_t expected = n_states_ * n_actions_ * n_states_;
    if (transition_.size() != expected || reward_.size() != expected) {
        throw UsageError("transition/reward tensors must have n_states*n_actions*n_states = " +
                         std::to_string(expected) + " entries");
    }
    if (absorbing_.size() != n_states_) {
        throw UsageError("absorbing flags must have one entry per state");
    }
    if (!(discount_ >= 0.0 && discount_ < 1.0)) {
        throw UsageError("discount must lie in [0, 1)");
    }
    if (start_state_ >= n_states_) {
        throw UsageError("start_state out of range");
    }

    expected_reward_.resize(n_states_ * n_actions_);
    for (StateIndex s = 0; s < n_states_; ++s) {
        for (ActionIndex a = 0; a < n_actions_; ++a) {
            const auto t = transition_row(s, a);
            const auto r = reward_row(s, a);
            double sum = 0.0;
            double er = 0.0;
            for (StateIndex next = 0; next < n_states_; ++next) {
                if (!(t[next] >= 0.0) || !std::isfinite(t[next])) {
                    throw UsageError("transition(" + std::to_string(s) + "," + std::to_string(a) +
                                     ",.) has a negative or non-finite entry");
                }
                if (!std::isfinite(r[next])) {
                    throw UsageError("reward tensor has a non-finite entry");
                }
                sum += t[next];
                er += t[next] * r[next];
                if (t[next] > 0.0) {
                    max_abs_reward_ = std::max(max_abs_reward_, std::fabs(r[next]));
                }
            }
            if (std::fabs(sum - 1.0) > kRowSumTolerance) {
                throw UsageError("transition(" + std::to_string(s) + "," + std::to_string(a) +
                                 ",.) sums to " + std::to_string(sum));
            }
            if (absorbing_[s] && (t[s] != 1.0 || r[s] != 0.0)) {
                throw UsageError("absorbing state " + std::to_string(s) +
                                 " must self-loop with probability 1 and zero reward");
            }
            expected_reward_[s * n_actions_ + a] = er;
        }
    }
}

bool TabularMdp::same_structure(const TabularMdp& other) const noexcept {
    return n_states_ == other.n_states_ && n_actions_ == other.n_actions_ &&
           discount_ == other.discount_ && start_state_ == other.start_state_ &&
           absorbing_ == other.absorbing_;
}

bool TabularMdp::operator==(const TabularMdp& other) const {
    return same_structure(other) && transition_ == other.transition_ && reward_ == other.reward_;
}

QFunction::QFunction(std::size_t n_states, std::size_t n_actions, std::vector<double> values)
    : n_states_(n_states), n_actions_(n_actions), values_(std::move(values)) {
    if (values_.size() != n_states_ * n_actions_) {
        throw UsageError("Q table size does not match n_states * n_actions");
    }
}

BackupResult bellman_backup(const ValueFunction& v, const TabularMdp& mdp) {
    const std::size_t ns = mdp.n_states();
    const std::size_t na = mdp.n_actions();
    if (v.size() != ns) {
        throw UsageError("value function has " + std::to_string(v.size()) +
                         " entries, MDP has " + std::to_string(ns) + " states");
    }
    const auto& k = simd::kernels();
    const double gamma = mdp.discount();
    const double* vdata = v.values().data();

    BackupResult out{ValueFunction(ns), QFunction(ns, na)};
    for (StateIndex s = 0; s < ns; ++s) {
        double best = 0.0;
        for (ActionIndex a = 0; a < na; ++a) {
            const double q =
                mdp.expected_reward(s, a) + gamma * k.dot(mdp.transition_row(s, a).data(), vdata, ns);
            out.q(s, a) = q;
            if (a == 0 || q > best) {
                best = q;
            }
        }
        out.value[s] = best;
    }
    return out;
}

std::size_t default_max_iterations(double tol, double discount) {
    if (!(tol > 0.0) || tol >= 1.0 || discount <= 0.0) {
        return 10;
    }
    return 10 * std::max<std::size_t>(
                    1, static_cast<std::size_t>(std::ceil(std::log(tol) / std::log(discount))));
}

ValueIterationResult value_iteration(const TabularMdp& mdp, double tol, std::size_t max_iters) {
    if (!(tol > 0.0)) {
        throw UsageError("value_iteration: tol must be positive");
    }
    ValueIterationResult result;
    result.value = ValueFunction(mdp.n_states());
    result.q = QFunction(mdp.n_states(), mdp.n_actions());
    result.residual = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= max_iters; ++it) {
        BackupResult next = bellman_backup(result.value, mdp);
        result.residual = simd::max_abs_diff(next.value.values(), result.value.values());
        result.value = std::move(next.value);
        result.q = std::move(next.q);
        result.iterations = it;
        if (result.residual <= tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

DeterministicPolicy greedy_policy(const QFunction& q) {
    std::vector<ActionIndex> actions(q.n_states(), 0);
    for (StateIndex s = 0; s < q.n_states(); ++s) {
        const auto row = q.row(s);
        ActionIndex best = 0;
        for (ActionIndex a = 1; a < row.size(); ++a) {
            if (row[a] > row[best]) {
                best = a;
            }
        }
        actions[s] = best;
    }
    return DeterministicPolicy(std::move(actions));
}

namespace {

void check_policy(const TabularMdp& mdp, const DeterministicPolicy& policy) {
    if (policy.size() != mdp.n_states()) {
        throw UsageError("policy length does not match the number of states");
    }
    for (ActionIndex a : policy.actions()) {
        if (a >= mdp.n_actions()) {
            throw UsageError("policy selects an action out of range");
        }
    }
}

}  // namespace

ValueFunction evaluate_policy_exact(const TabularMdp& mdp, const DeterministicPolicy& policy,
                                    double tol) {
    if (!(tol > 0.0)) {
        throw UsageError("evaluate_policy_exact: tol must be positive");
    }
    check_policy(mdp, policy);
    const std::size_t ns = mdp.n_states();
    const double gamma = mdp.discount();
    const auto& k = simd::kernels();

    ValueFunction v(ns);
    ValueFunction next(ns);
    for (std::size_t it = 0;; ++it) {
        for (StateIndex s = 0; s < ns; ++s) {
            const ActionIndex a = policy[s];
            next[s] = mdp.expected_reward(s, a) +
                      gamma * k.dot(mdp.transition_row(s, a).data(), v.values().data(), ns);
        }
        const double residual = k.max_abs_diff(next.values().data(), v.values().data(), ns);
        std::swap(v, next);
        if (!std::isfinite(residual)) {
            throw SolverError("evaluate_policy_exact: non-finite residual");
        }
        if (residual * gamma <= tol * (1.0 - gamma)) {
            break;
        }
        if (it > 100'000'000) {
            throw SolverError("evaluate_policy_exact: no convergence");
        }
    }
    return v;
}

double rollout_return(const TabularMdp& mdp, const DeterministicPolicy& policy,
                      std::size_t horizon, std::uint64_t seed, std::uint64_t rollout_index) {
    CounterRng rng = CounterRng::stream(seed, rollout_index);
    const std::size_t ns = mdp.n_states();
    const double gamma = mdp.discount();
    StateIndex s = mdp.start_state();
    double total = 0.0;
    double weight = 1.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        if (mdp.is_absorbing(s)) {
            break;
        }
        const ActionIndex a = policy[s];
        const auto row = mdp.transition_row(s, a);
        const double u = rng.uniform();
        // inverse CDF; fall back to the last state with positive mass so that
        // rounding in the cumulative sum never selects a zero-probability state
        StateIndex next = ns;
        double cumulative = 0.0;
        for (StateIndex j = 0; j < ns; ++j) {
            if (row[j] <= 0.0) continue;
            cumulative += row[j];
            next = j;
            if (u < cumulative) break;
        }
        total += weight * mdp.reward(s, a, next);
        weight *= gamma;
        s = next;
    }
    return total;
}

MonteCarloEstimate monte_carlo_return(const TabularMdp& mdp, const DeterministicPolicy& policy,
                                      std::size_t n_rollouts, std::size_t horizon,
                                      std::uint64_t seed) {
    if (n_rollouts == 0 || horizon == 0) {
        throw UsageError("monte_carlo_return: n_rollouts and horizon must be >= 1");
    }
    check_policy(mdp, policy);

    std::vector<double> returns(n_rollouts);
    for (std::size_t k = 0; k < n_rollouts; ++k) {
        returns[k] = rollout_return(mdp, policy, horizon, seed, k);
    }

    // Welford on offsets from the first return: identical returns give an
    // exactly zero variance and mean.
    const double shift = returns.front();
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k < n_rollouts; ++k) {
        const double x = returns[k] - shift;
        const double delta = x - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (x - mean);
    }
    MonteCarloEstimate est;
    est.mean = shift + mean;
    if (n_rollouts > 1) {
        const double variance = m2 / static_cast<double>(n_rollouts - 1);
        est.std_error = std::sqrt(std::max(variance, 0.0) / static_cast<double>(n_rollouts));
    }
    return est;
}

}  // namespace rmdp
