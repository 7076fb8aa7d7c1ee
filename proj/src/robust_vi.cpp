#include "rmdp/robust_vi.hpp"

#include "rmdp/csv.hpp"
#include "rmdp/errors.hpp"
#include "rmdp/simd.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace rmdp {

RobustBackupResult robust_bellman_backup(const ValueFunction& v, const RectangularClosure& closure) {
    const std::size_t ns = closure.n_states();
    const std::size_t na = closure.n_actions();
    const std::size_t nc = closure.n_candidates();
    if (v.size() != ns) {
        throw UsageError("value function has " + std::to_string(v.size()) +
                         " entries, uncertainty set has " + std::to_string(ns) + " states");
    }
    const auto& k = simd::kernels();
    const double gamma = closure.discount();
    const double* vdata = v.values().data();

    RobustBackupResult out{ValueFunction(ns), QFunction(ns, na),
                           std::vector<std::size_t>(ns * na, 0)};
    for (StateIndex s = 0; s < ns; ++s) {
        double best = 0.0;
        for (ActionIndex a = 0; a < na; ++a) {
            double worst = std::numeric_limits<double>::infinity();
            std::size_t worst_j = 0;
            for (std::size_t j = 0; j < nc; ++j) {
                const double q = closure.candidate_expected_reward(s, a, j) +
                                 gamma * k.dot(closure.candidate_row(s, a, j).data(), vdata, ns);
                if (q < worst) {
                    worst = q;
                    worst_j = j;
                }
            }
            out.q(s, a) = worst;
            out.worst_candidate[s * na + a] = worst_j;
            if (a == 0 || worst > best) {
                best = worst;
            }
        }
        out.value[s] = best;
    }
    return out;
}

RobustBackupResult robust_bellman_backup(const ValueFunction& v, const DiscreteUncertaintySet& set) {
    if (set.empty()) {
        throw UsageError("robust backup over an empty uncertainty set");
    }
    return robust_bellman_backup(v, RectangularClosure(set));
}

RobustSolveReport robust_value_iteration(const RectangularClosure& closure, double tol,
                                         std::size_t max_iters) {
    if (!(tol > 0.0)) {
        throw UsageError("robust_value_iteration: tol must be positive");
    }
    const StateIndex s0 = closure.start_state();
    RobustSolveReport report;
    report.robust_value = ValueFunction(closure.n_states());
    report.robust_q = QFunction(closure.n_states(), closure.n_actions());
    for (std::size_t it = 1; it <= max_iters; ++it) {
        RobustBackupResult next = robust_bellman_backup(report.robust_value, closure);
        const double residual =
            simd::max_abs_diff(next.value.values(), report.robust_value.values());
        report.robust_value = std::move(next.value);
        report.robust_q = std::move(next.q);
        report.iterations = it;
        report.iterate_trace.push_back({it, report.robust_value[s0], residual});
        if (residual <= tol) {
            report.converged = true;
            break;
        }
    }
    return report;
}

RobustSolveReport robust_value_iteration(const DiscreteUncertaintySet& set, double tol,
                                         std::size_t max_iters) {
    return robust_value_iteration(RectangularClosure(set), tol, max_iters);
}

void write_trace_csv(std::ostream& out, const RobustSolveReport& report) {
    out << "iteration,value_at_start_state,residual,abs_gap_to_final\n";
    const double last = report.iterate_trace.empty() ? 0.0 : report.iterate_trace.back().value_at_start;
    for (const auto& p : report.iterate_trace) {
        out << p.iteration << ',' << csv::number(p.value_at_start) << ','
            << csv::number(p.residual) << ',' << csv::number(std::fabs(p.value_at_start - last))
            << '\n';
    }
}

}  // namespace rmdp
