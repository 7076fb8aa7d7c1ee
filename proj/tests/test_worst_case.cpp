#include "oracles.hpp"

#include "rmdp/envs.hpp"
#include "rmdp/errors.hpp"
#include "rmdp/worst_case_search.hpp"

#include <doctest.h>

#include <random>

using namespace rmdp;

namespace {

// Two states; the single action from state 0 slips into a costly sink with
// probability p, otherwise into a free sink. Value at 0 is decreasing in p.
ModelFamily slip_family() {
    return ModelFamily::continuous("slip", {0.0}, {1.0}, [](std::span<const double> p) {
        const double q = p[0];
        std::vector<double> t{0.0, 1.0 - q, q, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0};
        std::vector<double> r{0.0, 0.0, -5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
        return TabularMdp(3, 1, t, r, 0.9, 0, {false, true, true});
    });
}

DeterministicPolicy zeros(std::size_t n) { return DeterministicPolicy(std::vector<ActionIndex>(n, 0)); }

}  // namespace

TEST_CASE("grid_worst_case") {
    const auto exact = exact_evaluator(1e-10);
    SUBCASE("singleton") {
        std::mt19937_64 rng(1);
        const auto set = oracle::random_set(rng, {4, 2, 0.9, true}, 1);
        const auto out = grid_worst_case(exact, zeros(4), set);
        CHECK(out.index == 0u);
        CHECK(*out.model == set.model(0));
        CHECK(out.value == exact(zeros(4), set.model(0)).value);
        CHECK(out.evaluations == 1);
    }
    SUBCASE("windy walk, policy optimal without wind") {
        const GridMap map = default_windy_walk_map();
        const auto set = DiscreteUncertaintySet::from_family(windy_walk_family(map));
        const auto pi = greedy_policy(value_iteration(set.model(0), 1e-10, 10'000).q);
        const auto out = grid_worst_case(exact, pi, set);
        // exhaustive oracle with a dense solve per member
        std::vector<std::size_t> raw(pi.actions().begin(), pi.actions().end());
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t j = 0; j < set.size(); ++j) {
            const double v = oracle::policy_value(set.model(j), raw)(map.start_state());
            CHECK(out.member_values[j] == doctest::Approx(v).epsilon(1e-8));
            if (j == 0 || v < best) {
                best = v;
                arg = j;
            }
        }
        CHECK(out.index == arg);
        CHECK(out.parameter == Parameter{0.5});
        for (double v : out.member_values) CHECK(out.value <= v);
    }
    SUBCASE("ties go to index 0") {
        std::mt19937_64 rng(2);
        const auto set = oracle::random_set(rng, {3, 2, 0.9, false}, 4);
        const PolicyEvaluator flat = [](const DeterministicPolicy&, const TabularMdp&) {
            return PolicyEvaluation{1.0, 0.0};
        };
        CHECK(grid_worst_case(flat, zeros(3), set).index == 0u);
    }
    SUBCASE("empty set") {
        CHECK_THROWS_AS(grid_worst_case(exact, zeros(1), DiscreteUncertaintySet{}), UsageError);
    }
}

TEST_CASE("cmaes_worst_case") {
    const auto exact = exact_evaluator(1e-12);
    CmaesConfig cfg;
    cfg.seed = 5;
    SUBCASE("monotone family ends near the upper bound") {
        const auto fam = slip_family();
        const auto out = cmaes_worst_case(exact, zeros(3), fam, cfg);
        double grid_min = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double v = exact(zeros(3), fam.generate(std::vector<double>{i / 1000.0})).value;
            grid_min = i == 0 ? v : std::min(grid_min, v);
        }
        CHECK(out.parameter[0] >= 0.98);
        CHECK(out.value >= grid_min - 1e-9);
        CHECK(out.value == exact(zeros(3), *out.model).value);
        CHECK(out.history.size() == cfg.generations);
    }
    SUBCASE("constant family agrees with grid search") {
        std::mt19937_64 rng(3);
        const TabularMdp m = oracle::random_mdp(rng, {4, 2, 0.9, false});
        const auto fam =
            ModelFamily::continuous("flat", {0.0, 0.0}, {1.0, 1.0}, [m](std::span<const double>) { return m; });
        const auto out = cmaes_worst_case(exact, zeros(4), fam, cfg);
        const auto grid = grid_worst_case(exact, zeros(4), enumerate_grid(fam, 3));
        CHECK(out.value == grid.value);
    }
    SUBCASE("windy walk under the experiment budget") {
        const GridMap map = default_windy_walk_map();
        const auto fam = windy_walk_continuous_family(map);
        const auto set = enumerate_grid(fam, 25);
        for (double alpha : {0.0, 0.25, 0.5}) {
            const auto pi = greedy_policy(value_iteration(windy_walk(map, alpha), 1e-8, 10'000).q);
            const auto grid = grid_worst_case(exact, pi, set);
            const auto out = cmaes_worst_case(exact, pi, fam, cfg);
            CHECK(std::fabs(out.value - grid.value) <= 1e-2);
        }
    }
    SUBCASE("Monte-Carlo evaluation is reproducible") {
        const auto mc = monte_carlo_evaluator(50, 500, 9);
        const auto fam = windy_walk_continuous_family(default_windy_walk_map());
        const DeterministicPolicy pi(std::vector<ActionIndex>(36, 2));
        CmaesConfig small;
        small.population = 8;
        small.generations = 2;
        const auto out = cmaes_worst_case(mc, pi, fam, small);
        const auto again = mc(pi, *out.model);
        CHECK(again.value == out.value);
        CHECK(again.std_error == out.std_error);
    }
}

TEST_CASE("evaluator and helper errors") {
    CHECK_THROWS_AS(exact_evaluator(0.0), UsageError);
    CHECK_THROWS_AS(monte_carlo_evaluator(0, 10, 0), UsageError);
    CHECK_THROWS_AS(denormalize(std::vector<double>{0.5}, {0.0, 0.0}, {1.0, 1.0}), UsageError);
    const auto p = denormalize(std::vector<double>{-0.2, 0.25, 1.7}, {0.0, 1.0, 2.0}, {1.0, 3.0, 2.5});
    CHECK(p == Parameter{0.0, 1.5, 2.5});
}
