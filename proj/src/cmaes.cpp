#include "rmdp/cmaes.hpp"

#include "rmdp/csv.hpp"
#include "rmdp/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

namespace rmdp {

void CmaesConfig::validate(std::size_t dimension) const {
    if (dimension == 0) throw UsageError("CMA-ES: dimension must be >= 1");
    if (population < 2) throw UsageError("CMA-ES: population must be >= 2");
    if (generations < 1) throw UsageError("CMA-ES: generations must be >= 1");
    if (!(initial_std > 0.0)) throw UsageError("CMA-ES: initial_std must be positive");
    if (!initial_mean.empty() && initial_mean.size() != dimension) {
        throw UsageError("CMA-ES: initial_mean has " + std::to_string(initial_mean.size()) +
                         " entries, expected " + std::to_string(dimension));
    }
}

namespace {

struct Strategy {
    std::size_t n;
    std::size_t lambda;
    std::size_t mu;
    Eigen::VectorXd weights;
    double mu_eff;
    double c_sigma;
    double d_sigma;
    double c_c;
    double c_1;
    double c_mu;
    double chi_n;

    Strategy(std::size_t dim, std::size_t population) : n(dim), lambda(population) {
        mu = (lambda + 1) / 2;
        weights.resize(static_cast<Eigen::Index>(mu));
        for (std::size_t i = 0; i < mu; ++i) {
            weights[static_cast<Eigen::Index>(i)] =
                std::log(static_cast<double>(mu) + 0.5) - std::log(static_cast<double>(i + 1));
        }
        weights /= weights.sum();
        mu_eff = 1.0 / weights.squaredNorm();

        const double nd = static_cast<double>(n);
        c_sigma = (mu_eff + 2.0) / (nd + mu_eff + 5.0);
        d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (nd + 1.0)) - 1.0) + c_sigma;
        c_c = (4.0 + mu_eff / nd) / (nd + 4.0 + 2.0 * mu_eff / nd);
        c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mu_eff);
        c_mu = std::min(1.0 - c_1,
                        2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nd + 2.0) * (nd + 2.0) + mu_eff));
        chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));
    }
};

}  // namespace

CmaesResult cmaes_minimize(const Objective& objective, std::size_t dimension,
                           const CmaesConfig& config) {
    config.validate(dimension);
    const Strategy st(dimension, config.population);
    const auto n = static_cast<Eigen::Index>(dimension);

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Eigen::VectorXd mean(n);
    for (Eigen::Index d = 0; d < n; ++d) {
        mean[d] = config.initial_mean.empty() ? 0.5 : config.initial_mean[static_cast<std::size_t>(d)];
    }
    double sigma = config.initial_std;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd scales = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd path_sigma = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd path_c = Eigen::VectorXd::Zero(n);

    CmaesResult result;
    result.best_value = std::numeric_limits<double>::infinity();

    std::vector<Eigen::VectorXd> raw(config.population, Eigen::VectorXd(n));
    std::vector<double> values(config.population);
    std::vector<double> clipped(dimension);
    std::vector<std::size_t> order(config.population);

    for (std::size_t g = 1; g <= config.generations; ++g) {
        const double sigma_used = sigma;
        for (std::size_t k = 0; k < config.population; ++k) {
            Eigen::VectorXd z(n);
            for (Eigen::Index d = 0; d < n; ++d) z[d] = normal(rng);
            raw[k] = mean + sigma * (basis * scales.asDiagonal() * z);
            for (Eigen::Index d = 0; d < n; ++d) {
                clipped[static_cast<std::size_t>(d)] = std::clamp(raw[k][d], 0.0, 1.0);
            }
            const double f = objective(clipped);
            ++result.evaluations;
            if (!std::isfinite(f)) {
                throw SolverError("CMA-ES: objective returned a non-finite value at generation " +
                                  std::to_string(g));
            }
            values[k] = f;
            if (f < result.best_value) {
                result.best_value = f;
                result.best_point = clipped;
            }
        }

        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

        const Eigen::VectorXd old_mean = mean;
        mean.setZero();
        for (std::size_t i = 0; i < st.mu; ++i) {
            mean += st.weights[static_cast<Eigen::Index>(i)] * raw[order[i]];
        }
        const Eigen::VectorXd step = (mean - old_mean) / sigma;

        // C^{-1/2} step
        const Eigen::VectorXd whitened =
            basis * scales.cwiseInverse().asDiagonal() * basis.transpose() * step;
        path_sigma = (1.0 - st.c_sigma) * path_sigma +
                     std::sqrt(st.c_sigma * (2.0 - st.c_sigma) * st.mu_eff) * whitened;
        const double ps_norm = path_sigma.norm();
        const double decay = 1.0 - std::pow(1.0 - st.c_sigma, 2.0 * static_cast<double>(g));
        const bool h_sigma =
            ps_norm / std::sqrt(decay) < (1.4 + 2.0 / (static_cast<double>(dimension) + 1.0)) * st.chi_n;

        path_c = (1.0 - st.c_c) * path_c +
                 (h_sigma ? std::sqrt(st.c_c * (2.0 - st.c_c) * st.mu_eff) : 0.0) * step;

        Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < st.mu; ++i) {
            const Eigen::VectorXd y = (raw[order[i]] - old_mean) / sigma;
            rank_mu += st.weights[static_cast<Eigen::Index>(i)] * y * y.transpose();
        }
        const double h_loss = h_sigma ? 0.0 : st.c_c * (2.0 - st.c_c);
        cov = (1.0 - st.c_1 - st.c_mu + st.c_1 * h_loss) * cov +
              st.c_1 * path_c * path_c.transpose() + st.c_mu * rank_mu;
        cov = 0.5 * (cov + cov.transpose());

        sigma *= std::exp((st.c_sigma / st.d_sigma) * (ps_norm / st.chi_n - 1.0));

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
        basis = eig.eigenvectors();
        scales = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt();

        const double mean_value =
            std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
        result.history.push_back({g, result.best_value, mean_value, sigma_used});
    }
    return result;
}

void write_history_csv(std::ostream& out, const std::vector<CmaesGeneration>& history) {
    out << "generation,best_value_so_far,mean_value,step_size\n";
    for (const auto& h : history) {
        out << h.generation << ',' << csv::number(h.best_value_so_far) << ','
            << csv::number(h.mean_value) << ',' << csv::number(h.step_size) << '\n';
    }
}

}  // namespace rmdp
