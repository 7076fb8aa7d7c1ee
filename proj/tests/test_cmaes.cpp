#include "rmdp/cmaes.hpp"
#include "rmdp/csv.hpp"
#include "rmdp/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace rmdp;

namespace {

double centered_sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += (v - 0.5) * (v - 0.5);
    return s;
}

}  // namespace

TEST_CASE("CMA-ES on the sphere") {
    CmaesConfig cfg;
    cfg.population = 16;
    cfg.generations = 50;
    cfg.initial_mean = {0.1, 0.9, 0.3};
    cfg.initial_std = 0.3;
    cfg.seed = 1;
    const auto r = cmaes_minimize(centered_sphere, 3, cfg);
    CHECK(r.best_value <= 1e-6);
    CHECK(r.evaluations == 16 * 50);
    REQUIRE(r.history.size() == 50);
    for (std::size_t g = 1; g < r.history.size(); ++g) {
        CHECK(r.history[g].generation == g + 1);
        CHECK(r.history[g].best_value_so_far <= r.history[g - 1].best_value_so_far);
    }
    CHECK(r.history.back().best_value_so_far == r.best_value);
    CHECK(centered_sphere(r.best_point) == r.best_value);
}

TEST_CASE("CMA-ES finds a kink in one dimension") {
    CmaesConfig cfg;
    cfg.population = 16;
    cfg.generations = 30;
    cfg.seed = 4;
    const auto r = cmaes_minimize([](std::span<const double> x) { return std::fabs(x[0] - 0.3); }, 1, cfg);
    CHECK(std::fabs(r.best_point[0] - 0.3) <= 1e-3);
}

TEST_CASE("CMA-ES on a constant objective") {
    CmaesConfig cfg;
    cfg.population = 8;
    cfg.generations = 3;
    const auto r = cmaes_minimize([](std::span<const double>) { return 2.5; }, 2, cfg);
    CHECK(r.best_value == 2.5);
    CHECK(r.best_point.size() == 2);
}

TEST_CASE("CMA-ES samples stay in the unit box") {
    CmaesConfig cfg;
    cfg.population = 20;
    cfg.generations = 10;
    cfg.initial_std = 3.0;
    bool outside = false;
    // pushes the search hard against the upper corner
    cmaes_minimize(
        [&](std::span<const double> x) {
            for (double v : x) outside |= v < 0.0 || v > 1.0;
            return -(x[0] + x[1]);
        },
        2, cfg);
    CHECK_FALSE(outside);
}

TEST_CASE("CMA-ES is deterministic in the seed") {
    CmaesConfig cfg;
    cfg.population = 10;
    cfg.generations = 5;
    cfg.seed = 77;
    const auto f = [](std::span<const double> x) { return std::sin(7.0 * x[0]) + x[1]; };
    const auto a = cmaes_minimize(f, 2, cfg);
    const auto b = cmaes_minimize(f, 2, cfg);
    CHECK(a.best_point == b.best_point);
    CHECK(a.best_value == b.best_value);
    cfg.seed = 78;
    CHECK(cmaes_minimize(f, 2, cfg).best_point != a.best_point);
}

TEST_CASE("CMA-ES errors") {
    CmaesConfig cfg;
    CHECK_THROWS_AS(cmaes_minimize(centered_sphere, 0, cfg), UsageError);
    cfg.population = 1;
    CHECK_THROWS_AS(cmaes_minimize(centered_sphere, 2, cfg), UsageError);
    cfg = {};
    cfg.generations = 0;
    CHECK_THROWS_AS(cmaes_minimize(centered_sphere, 2, cfg), UsageError);
    cfg = {};
    cfg.initial_std = 0.0;
    CHECK_THROWS_AS(cmaes_minimize(centered_sphere, 2, cfg), UsageError);
    cfg = {};
    cfg.initial_mean = {0.5};
    CHECK_THROWS_AS(cmaes_minimize(centered_sphere, 2, cfg), UsageError);
    cfg = {};
    CHECK_THROWS_AS(cmaes_minimize([](std::span<const double>) { return std::nan(""); }, 1, cfg),
                    SolverError);
    CHECK_THROWS_AS(cmaes_minimize(
                        [](std::span<const double>) { return std::numeric_limits<double>::infinity(); },
                        1, cfg),
                    SolverError);
}

TEST_CASE("CMA-ES history CSV") {
    CmaesConfig cfg;
    cfg.population = 6;
    cfg.generations = 4;
    const auto r = cmaes_minimize(centered_sphere, 2, cfg);
    std::ostringstream os;
    write_history_csv(os, r.history);
    const auto t = csv::parse(os.str());
    CHECK(t.header == std::vector<std::string>{"generation", "best_value_so_far", "mean_value", "step_size"});
    REQUIRE(t.rows.size() == 4);
    CHECK(t.number_at(0, "step_size") == cfg.initial_std);
    CHECK(t.number_at(3, "best_value_so_far") == r.best_value);
}
