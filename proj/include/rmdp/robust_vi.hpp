#pragma once

#include "rmdp/mdp.hpp"
#include "rmdp/uncertainty.hpp"

#include <iosfwd>
#include <vector>

namespace rmdp {

struct RobustBackupResult {
    ValueFunction value;
    QFunction q;
    /// Index of the minimizing candidate for each (s,a), row-major; lowest
    /// index on ties.
    std::vector<std::size_t> worst_candidate;
};

/// Q(s,a) = min_j sum_{s'} T_j(s,a,s') (r_j(s,a,s') + discount v(s')),
/// V'(s) = max_a Q(s,a).
RobustBackupResult robust_bellman_backup(const ValueFunction& v, const RectangularClosure& closure);
RobustBackupResult robust_bellman_backup(const ValueFunction& v, const DiscreteUncertaintySet& set);

struct RobustTracePoint {
    std::size_t iteration = 0;
    double value_at_start = 0.0;
    double residual = 0.0;
};

struct RobustSolveReport {
    ValueFunction robust_value;
    QFunction robust_q;
    /// One entry per robust backup, starting from V = 0.
    std::vector<RobustTracePoint> iterate_trace;
    std::size_t iterations = 0;
    bool converged = false;
};

RobustSolveReport robust_value_iteration(const RectangularClosure& closure, double tol,
                                         std::size_t max_iters);
RobustSolveReport robust_value_iteration(const DiscreteUncertaintySet& set, double tol,
                                         std::size_t max_iters);

/// CSV columns: iteration,value_at_start_state,residual,abs_gap_to_final
/// (the last column measures against the final iterate at the start state)
void write_trace_csv(std::ostream& out, const RobustSolveReport& report);

}  // namespace rmdp
