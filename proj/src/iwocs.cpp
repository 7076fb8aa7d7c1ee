#include "rmdp/iwocs.hpp"

#include "rmdp/csv.hpp"
#include "rmdp/errors.hpp"
#include "rmdp/robust_vi.hpp"
#include "rmdp/simd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace rmdp {

QFunction min_aggregate(std::span<const QFunction> tables) {
    if (tables.empty()) throw UsageError("min_aggregate: no tables");
    QFunction out = tables.front();
    for (std::size_t j = 1; j < tables.size(); ++j) {
        const QFunction& t = tables[j];
        if (t.n_states() != out.n_states() || t.n_actions() != out.n_actions()) {
            throw UsageError("min_aggregate: Q-table shapes differ");
        }
        simd::min_inplace(out.values(), t.values());
    }
    return out;
}

void AggregatePolicy::append(QFunction table) {
    if (tables_.empty()) {
        combined_ = table;
    } else {
        if (table.n_states() != combined_.n_states() || table.n_actions() != combined_.n_actions()) {
            throw UsageError("AggregatePolicy: Q-table shape differs from earlier tables");
        }
        simd::min_inplace(combined_.values(), table.values());
    }
    tables_.push_back(std::move(table));
    greedy_ = greedy_policy(combined_);
}

std::string_view to_string(IwocsStatus status) {
    switch (status) {
        case IwocsStatus::converged: return "converged";
        case IwocsStatus::max_iterations: return "max-iterations";
        case IwocsStatus::repeated_worst_case: return "repeated-worst-case";
    }
    return "unknown";
}

std::string_view to_string(SearcherKind kind) {
    return kind == SearcherKind::grid ? "grid" : "cmaes";
}

std::size_t IwocsResult::total_bellman_backups() const {
    std::size_t total = 0;
    for (const auto& it : trace) total += it.vi_iterations;
    return total;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool already_solved(const DiscreteUncertaintySet& solved, const Parameter& p, double tol) {
    for (const auto& q : solved.parameters()) {
        if (q.size() != p.size()) continue;
        double dist = 0.0;
        for (std::size_t d = 0; d < p.size(); ++d) dist = std::max(dist, std::fabs(p[d] - q[d]));
        if (tol == 0.0 ? std::equal(p.begin(), p.end(), q.begin()) : dist <= tol) {
            return true;
        }
    }
    return false;
}

void validate(const IwocsOptions& options) {
    if (!(options.epsilon > 0.0)) throw UsageError("IWOCS: epsilon must be positive");
    if (!(options.vi_tol > 0.0)) throw UsageError("IWOCS: vi_tol must be positive");
    if (!options.evaluator) throw UsageError("IWOCS: no policy evaluator");
    if (options.duplicate_tol < 0.0) throw UsageError("IWOCS: duplicate_tol must be >= 0");
}

template <class Search>
IwocsResult iwocs_loop(Parameter t, TabularMdp model, const IwocsOptions& options, Search&& search,
                       double duplicate_tol) {
    IwocsResult result;
    const std::size_t vi_max = options.vi_max_iters > 0
                                   ? options.vi_max_iters
                                   : default_max_iterations(options.vi_tol, model.discount());
    const StateIndex s0 = model.start_state();

    for (std::size_t i = 0;; ++i) {
        IwocsIteration rec;
        rec.iteration = i;
        rec.solved_parameter = t;

        auto start = Clock::now();
        ValueIterationResult vi = value_iteration(model, options.vi_tol, vi_max);
        rec.solve_seconds = seconds_since(start);
        if (!vi.converged) {
            throw SolverError("IWOCS iteration " + std::to_string(i) +
                              ": value iteration did not reach tol " +
                              std::to_string(options.vi_tol) + " within " + std::to_string(vi_max) +
                              " backups (residual " + std::to_string(vi.residual) + ")");
        }
        rec.vi_iterations = vi.iterations;
        result.solved.push_back(t, std::move(model));
        result.aggregate.append(std::move(vi.q));

        start = Clock::now();
        SearchOutcome worst = search(result.aggregate.greedy());
        rec.search_seconds = seconds_since(start);
        rec.search_evaluations = worst.evaluations;
        rec.search_history = std::move(worst.history);
        rec.worst_parameter = worst.parameter;
        rec.adversarial_value = worst.value;
        rec.adversarial_std_error = worst.std_error;
        rec.candidate_value = result.aggregate.candidate_value(s0);
        rec.gap = std::fabs(rec.adversarial_value - rec.candidate_value);
        result.worst_model = std::move(worst.model);

        bool stop = true;
        if (rec.gap <= options.epsilon) {
            result.status = IwocsStatus::converged;
        } else if (already_solved(result.solved, rec.worst_parameter, duplicate_tol)) {
            result.status = IwocsStatus::repeated_worst_case;
        } else if (i >= options.max_iterations) {
            result.status = IwocsStatus::max_iterations;
        } else {
            stop = false;
        }
        rec.stopped = stop;
        result.trace.push_back(rec);
        if (stop) break;

        t = rec.worst_parameter;
        model = *result.worst_model;
    }
    return result;
}

}  // namespace

IwocsResult run_iwocs(const ModelFamily& family, const IwocsOptions& options) {
    validate(options);
    Parameter t0 = options.t0 ? *options.t0 : family.default_start();
    if (!family.contains(t0)) throw UsageError("IWOCS: t0 lies outside the family domain");
    TabularMdp m0 = family.generate(t0);

    if (options.searcher == SearcherKind::cmaes) {
        if (!family.is_continuous()) {
            throw UsageError("IWOCS: the CMA-ES searcher needs a continuous family");
        }
        options.cmaes.validate(family.dimension());
        auto search = [&](const DeterministicPolicy& pi) {
            return cmaes_worst_case(options.evaluator, pi, family, options.cmaes);
        };
        return iwocs_loop(std::move(t0), std::move(m0), options, search, options.duplicate_tol);
    }

    const DiscreteUncertaintySet set = family.is_continuous()
                                           ? enumerate_grid(family, options.grid_points_per_dim)
                                           : DiscreteUncertaintySet::from_family(family);
    auto search = [&](const DeterministicPolicy& pi) {
        return grid_worst_case(options.evaluator, pi, set);
    };
    return iwocs_loop(std::move(t0), std::move(m0), options, search, 0.0);
}

IwocsResult run_iwocs(const DiscreteUncertaintySet& search_set, const IwocsOptions& options) {
    validate(options);
    if (search_set.empty()) throw UsageError("IWOCS: empty search set");
    if (options.searcher != SearcherKind::grid) {
        throw UsageError("IWOCS over an explicit set supports the grid searcher only");
    }
    std::size_t start = 0;
    if (options.t0) {
        const auto& ps = search_set.parameters();
        const auto it = std::find(ps.begin(), ps.end(), *options.t0);
        if (it == ps.end()) throw UsageError("IWOCS: t0 is not a member of the search set");
        start = static_cast<std::size_t>(it - ps.begin());
    }
    auto search = [&](const DeterministicPolicy& pi) {
        return grid_worst_case(options.evaluator, pi, search_set);
    };
    return iwocs_loop(search_set.parameter(start), search_set.model(start), options, search, 0.0);
}

SandwichReport check_sandwich(const AggregatePolicy& aggregate, const DiscreteUncertaintySet& solved,
                              const DiscreteUncertaintySet& full, double slack, double solve_tol) {
    if (aggregate.empty()) throw UsageError("check_sandwich: empty aggregate");
    const std::size_t max_iters = 100'000;
    SandwichReport report;
    report.closure_q = robust_value_iteration(solved, solve_tol, max_iters).robust_q;
    report.full_q = robust_value_iteration(full, solve_tol, max_iters).robust_q;

    const QFunction& combined = aggregate.combined();
    if (combined.n_states() != report.closure_q.n_states() ||
        combined.n_actions() != report.closure_q.n_actions() ||
        report.full_q.n_states() != combined.n_states()) {
        throw UsageError("check_sandwich: aggregate and sets differ in shape");
    }
    double upper = -std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    for (StateIndex s = 0; s < combined.n_states(); ++s) {
        for (ActionIndex a = 0; a < combined.n_actions(); ++a) {
            upper = std::max(upper, report.closure_q(s, a) - combined(s, a));
            lower = std::max(lower, report.full_q(s, a) - report.closure_q(s, a));
        }
    }
    report.upper_violation = upper;
    report.lower_violation = lower;
    report.max_violation = std::max({upper, lower, 0.0});
    report.holds = report.max_violation <= slack;
    return report;
}

void write_trace_csv(std::ostream& out, const IwocsResult& result) {
    const std::size_t dim = result.trace.empty() ? 0 : result.trace.front().worst_parameter.size();
    out << "iteration";
    for (std::size_t d = 0; d < dim; ++d) out << ",param_" << d;
    out << ",adversarial_value,candidate_value,gap,status\n";
    for (const auto& it : result.trace) {
        out << it.iteration;
        for (double p : it.worst_parameter) out << ',' << csv::number(p);
        out << ',' << csv::number(it.adversarial_value) << ',' << csv::number(it.candidate_value)
            << ',' << csv::number(it.gap) << ','
            << (it.stopped ? to_string(result.status) : std::string_view("continue")) << '\n';
    }
}

}  // namespace rmdp
