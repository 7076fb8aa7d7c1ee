#pragma once

// (mu/mu_w, lambda)-CMA-ES in the normalized unit box.
//
// Recombination uses log-rank weights over the best ceil(lambda/2) samples;
// step size follows cumulative step-size adaptation and the covariance gets
// the usual rank-one plus rank-mu update. Samples outside [0,1]^n are clipped
// before the objective sees them; the distribution update uses the raw
// samples.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace rmdp {

struct CmaesConfig {
    std::size_t population = 100;
    std::size_t generations = 6;
    /// Per-dimension start mean in the unit box; empty means 0.5 everywhere.
    std::vector<double> initial_mean;
    double initial_std = 0.5;
    std::uint64_t seed = 0;

    /// Throws UsageError if population < 2, generations < 1, initial_std <= 0
    /// or initial_mean has the wrong length.
    void validate(std::size_t dimension) const;
};

struct CmaesGeneration {
    std::size_t generation = 0;
    double best_value_so_far = 0.0;
    /// Mean objective value over this generation's samples.
    double mean_value = 0.0;
    /// Step size sigma used to draw this generation.
    double step_size = 0.0;
};

struct CmaesResult {
    std::vector<double> best_point;  // clipped, in the unit box
    double best_value = 0.0;
    std::vector<CmaesGeneration> history;
    std::size_t evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Minimizes `objective` over [0,1]^dimension. Deterministic for a given
/// config. Throws SolverError if the objective returns a non-finite value.
CmaesResult cmaes_minimize(const Objective& objective, std::size_t dimension,
                           const CmaesConfig& config);

/// CSV columns: generation,best_value_so_far,mean_value,step_size
void write_history_csv(std::ostream& out, const std::vector<CmaesGeneration>& history);

}  // namespace rmdp
