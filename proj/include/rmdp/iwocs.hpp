#pragma once

// Incremental worst-case search.
//
// Each iteration solves one non-robust MDP T_i by value iteration, folds its
// optimal Q-table into a pointwise minimum over all tables solved so far,
// takes the greedy policy of that minimum as the robust candidate, and asks
// a searcher for the model T_{i+1} on which the candidate does worst. The
// loop ends when the candidate's predicted value at s0 and its value under
// T_{i+1} agree within epsilon.

#include "rmdp/cmaes.hpp"
#include "rmdp/mdp.hpp"
#include "rmdp/uncertainty.hpp"
#include "rmdp/worst_case_search.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace rmdp {

/// Pointwise minimum of equally-shaped Q-tables.
QFunction min_aggregate(std::span<const QFunction> tables);

/// Ordered list of optimal Q-tables, their pointwise minimum and its greedy policy.
class AggregatePolicy {
public:
    AggregatePolicy() = default;

    /// Folds `table` into the minimum; throws UsageError on a shape mismatch.
    void append(QFunction table);

    std::size_t size() const noexcept { return tables_.size(); }
    bool empty() const noexcept { return tables_.empty(); }
    const std::vector<QFunction>& q_tables() const noexcept { return tables_; }
    const QFunction& combined() const noexcept { return combined_; }
    const DeterministicPolicy& greedy() const noexcept { return greedy_; }

    /// combined(s, greedy(s)).
    double candidate_value(StateIndex s) const { return combined_(s, greedy_[s]); }

private:
    std::vector<QFunction> tables_;
    QFunction combined_;
    DeterministicPolicy greedy_;
};

enum class SearcherKind { grid, cmaes };
enum class IwocsStatus { converged, max_iterations, repeated_worst_case };

std::string_view to_string(IwocsStatus status);
std::string_view to_string(SearcherKind kind);

struct IwocsOptions {
    /// First model; family.default_start() when unset.
    std::optional<Parameter> t0;
    std::size_t max_iterations = 25;
    double epsilon = 1e-2;
    SearcherKind searcher = SearcherKind::grid;
    /// Grid resolution when grid search runs over a continuous family.
    std::size_t grid_points_per_dim = 25;
    CmaesConfig cmaes;
    PolicyEvaluator evaluator = exact_evaluator();
    double vi_tol = 1e-3;
    /// 0 selects default_max_iterations(vi_tol, discount).
    std::size_t vi_max_iters = 0;
    /// L-infinity tolerance for treating a CMA-ES result as an already solved
    /// model. Grid search always uses exact parameter equality.
    double duplicate_tol = 1e-6;
};

struct IwocsIteration {
    std::size_t iteration = 0;
    Parameter solved_parameter;       // T_i
    std::size_t vi_iterations = 0;
    Parameter worst_parameter;        // T_{i+1}
    double adversarial_value = 0.0;   // V^{pi_i}_{T_{i+1}}(s0)
    double adversarial_std_error = 0.0;
    double candidate_value = 0.0;     // Q_i(s0, pi_i(s0))
    double gap = 0.0;
    bool stopped = false;
    double solve_seconds = 0.0;
    double search_seconds = 0.0;
    std::size_t search_evaluations = 0;
    /// CMA-ES searcher only: per-generation history of this iteration's search.
    std::vector<CmaesGeneration> search_history;
};

struct IwocsResult {
    AggregatePolicy aggregate;
    std::vector<IwocsIteration> trace;
    IwocsStatus status = IwocsStatus::max_iterations;
    /// Models solved so far, in order (T_0, T_1, ...).
    DiscreteUncertaintySet solved;
    std::optional<TabularMdp> worst_model;

    const DeterministicPolicy& policy() const noexcept { return aggregate.greedy(); }
    const IwocsIteration& last() const { return trace.back(); }
    std::size_t total_bellman_backups() const;
};

/// Throws SolverError if a value-iteration solve fails to reach vi_tol, and
/// UsageError for invalid options or a searcher/family mismatch.
IwocsResult run_iwocs(const ModelFamily& family, const IwocsOptions& options);

/// Same loop with an explicit discrete search set (grid searcher only).
IwocsResult run_iwocs(const DiscreteUncertaintySet& search_set, const IwocsOptions& options);

struct SandwichReport {
    /// max over (s,a) of (closure Q - combined), positive means violated.
    double upper_violation = 0.0;
    /// max over (s,a) of (full-set Q - closure Q).
    double lower_violation = 0.0;
    double max_violation = 0.0;
    bool holds = true;
    QFunction closure_q;
    QFunction full_q;
};

/// Checks combined >= Q*(closure of solved) >= Q*(full set) pointwise with
/// `slack`. Both robust tables come from robust value iteration run to
/// `solve_tol`.
SandwichReport check_sandwich(const AggregatePolicy& aggregate, const DiscreteUncertaintySet& solved,
                              const DiscreteUncertaintySet& full, double slack = 1e-6,
                              double solve_tol = 1e-11);

/// CSV columns: iteration,param_0..param_{d-1},adversarial_value,candidate_value,gap,status
/// status is "continue" for non-final rows and the final IwocsStatus otherwise.
void write_trace_csv(std::ostream& out, const IwocsResult& result);

}  // namespace rmdp
