#include "rmdp/harness.hpp"

#include "rmdp/csv.hpp"
#include "rmdp/errors.hpp"
#include "rmdp/mdp.hpp"
#include "rmdp/robust_vi.hpp"
#include "rmdp/rng.hpp"
#include "rmdp/simd.hpp"
#include "rmdp/worst_case_search.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

namespace rmdp::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kVersion = "0.1.0";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                std::string_view context) {
    if (!j.is_object()) {
        throw UsageError("config: '" + std::string(context) + "' must be an object");
    }
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw UsageError("config: unknown key '" + key + "' in " + std::string(context));
        }
    }
}

template <class T>
void read(const json& j, std::string_view key, T& out) {
    const std::string k(key);
    if (j.contains(k)) out = j.at(k).get<T>();
}

template <class T>
void read(const json& j, std::string_view key, std::optional<T>& out) {
    const std::string k(key);
    if (j.contains(k) && !j.at(k).is_null()) out = j.at(k).get<T>();
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path.string());
    f << body;
}

std::string value_csv(const ValueFunction& v) {
    std::ostringstream os;
    os << "state,value\n";
    for (std::size_t s = 0; s < v.size(); ++s) os << s << ',' << csv::number(v[s]) << '\n';
    return os.str();
}

std::string q_csv(const QFunction& q) {
    std::ostringstream os;
    os << "state";
    for (std::size_t a = 0; a < q.n_actions(); ++a) os << ",q_" << a;
    os << '\n';
    for (std::size_t s = 0; s < q.n_states(); ++s) {
        os << s;
        for (double x : q.row(s)) os << ',' << csv::number(x);
        os << '\n';
    }
    return os.str();
}

std::string policy_csv(const DeterministicPolicy& pi) {
    std::ostringstream os;
    os << "state,action\n";
    for (std::size_t s = 0; s < pi.size(); ++s) os << s << ',' << pi[s] << '\n';
    return os.str();
}

ValueFunction greedy_values(const QFunction& q) {
    ValueFunction v(q.n_states());
    for (std::size_t s = 0; s < q.n_states(); ++s) {
        v[s] = *std::max_element(q.row(s).begin(), q.row(s).end());
    }
    return v;
}

json base_summary(const ExperimentConfig& config, std::string_view command) {
    return json{{"command", command},
                {"version", kVersion},
                {"simd", simd::isa_name(simd::active_isa())},
                {"seed", config.seed},
                {"config", config_to_json(config)}};
}

json iteration_json(const IwocsIteration& it) {
    return json{{"iteration", it.iteration},
                {"solved_parameter", it.solved_parameter},
                {"worst_parameter", it.worst_parameter},
                {"vi_iterations", it.vi_iterations},
                {"adversarial_value", it.adversarial_value},
                {"adversarial_std_error", it.adversarial_std_error},
                {"candidate_value", it.candidate_value},
                {"gap", it.gap},
                {"solve_seconds", it.solve_seconds},
                {"search_seconds", it.search_seconds},
                {"search_evaluations", it.search_evaluations}};
}

GridMap load_map(const EnvironmentSpec& env) {
    if (!env.map_file) {
        return GridMap::parse(default_windy_walk_ascii(),
                              env.wind_zones.value_or(default_windy_walk_zones()));
    }
    std::ifstream f(*env.map_file);
    if (!f) throw UsageError("cannot read map file " + env.map_file->string());
    std::stringstream ss;
    ss << f.rdbuf();
    return GridMap::parse(ss.str(), env.wind_zones.value_or(std::vector<WindZone>{}));
}

std::size_t rvi_max_iters(double tol, double discount) {
    return default_max_iterations(tol, discount);
}

}  // namespace

// ---------------------------------------------------------------------------
// configuration

void ExperimentConfig::validate() const {
    if (environment.builtin != "windy-walk" && environment.builtin != "random") {
        throw UsageError("config: unknown environment '" + environment.builtin + "'");
    }
    if (environment.builtin == "random" && (environment.map_file || environment.wind_zones)) {
        throw UsageError("config: map_file/wind_zones apply to windy-walk only");
    }
    if (environment.n_states == 0 || environment.n_actions == 0 || environment.dimension == 0) {
        throw UsageError("config: random environment sizes must be >= 1");
    }
    if (!(environment.discount >= 0.0 && environment.discount < 1.0)) {
        throw UsageError("config: discount must lie in [0, 1)");
    }
    if (family.kind != "grid" && family.kind != "continuous") {
        throw UsageError("config: family.kind must be 'grid' or 'continuous'");
    }
    if (family.points_per_dim < 2) throw UsageError("config: points_per_dim must be >= 2");
    if (!(tol > 0.0) || !(epsilon > 0.0) || !(exact_tol > 0.0) || (rvi_tol && !(*rvi_tol > 0.0))) {
        throw UsageError("config: tolerances must be positive");
    }
    if (searcher == SearcherKind::cmaes && family.kind != "continuous") {
        throw UsageError("config: the cmaes searcher needs family.kind = 'continuous'");
    }
    if (mc_rollouts == 0 || mc_horizon == 0) {
        throw UsageError("config: mc_rollouts and mc_horizon must be >= 1");
    }
    CmaesConfig{cmaes_population, cmaes_generations, {}, cmaes_std, 0}.validate(1);
    if (!(cmaes_mean >= 0.0 && cmaes_mean <= 1.0)) {
        throw UsageError("config: cmaes mean must lie in the unit box");
    }
    if (scaling.family_sizes.empty() || scaling.repeats == 0 || scaling.n_states == 0 ||
        scaling.n_actions == 0) {
        throw UsageError("config: scaling needs family sizes, repeats and sizes >= 1");
    }
    for (std::size_t c : scaling.family_sizes) {
        if (c == 0) throw UsageError("config: scaling family sizes must be >= 1");
    }
}

std::vector<WindZone> parse_wind_zones(const json& j) {
    if (!j.is_array()) throw UsageError("config: wind_zones must be an array of [row, col, exponent]");
    std::vector<WindZone> zones;
    for (const auto& z : j) {
        if (!z.is_array() || z.size() != 3) {
            throw UsageError("config: each wind zone must be [row, col, exponent]");
        }
        zones.push_back({z[0].get<std::size_t>(), z[1].get<std::size_t>(), z[2].get<int>()});
    }
    return zones;
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "vi") return Algorithm::vi;
    if (name == "rvi") return Algorithm::rvi;
    if (name == "iwocs") return Algorithm::iwocs;
    throw UsageError("unknown algorithm '" + std::string(name) + "' (vi, rvi, iwocs)");
}

SearcherKind parse_searcher(std::string_view name) {
    if (name == "grid") return SearcherKind::grid;
    if (name == "cmaes") return SearcherKind::cmaes;
    throw UsageError("unknown searcher '" + std::string(name) + "' (grid, cmaes)");
}

EvaluatorKind parse_evaluator(std::string_view name) {
    if (name == "exact") return EvaluatorKind::exact;
    if (name == "mc") return EvaluatorKind::monte_carlo;
    throw UsageError("unknown evaluator '" + std::string(name) + "' (exact, mc)");
}

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::vi: return "vi";
        case Algorithm::rvi: return "rvi";
        case Algorithm::iwocs: return "iwocs";
    }
    return "unknown";
}

std::string_view to_string(EvaluatorKind kind) {
    return kind == EvaluatorKind::exact ? "exact" : "mc";
}

ExperimentConfig parse_config(const json& j, const fs::path& base_dir) {
    ExperimentConfig c;
    try {
        check_keys(j, {"environment", "family", "algorithm", "parameters", "seed", "output", "scaling"},
                   "config");
        if (j.contains("environment")) {
            const json& e = j.at("environment");
            check_keys(e, {"builtin", "map_file", "wind_zones", "n_states", "n_actions", "dimension",
                           "discount"},
                       "environment");
            read(e, "builtin", c.environment.builtin);
            if (e.contains("map_file")) {
                fs::path p = e.at("map_file").get<std::string>();
                c.environment.map_file = p.is_relative() ? base_dir / p : p;
            }
            if (e.contains("wind_zones")) c.environment.wind_zones = parse_wind_zones(e.at("wind_zones"));
            read(e, "n_states", c.environment.n_states);
            read(e, "n_actions", c.environment.n_actions);
            read(e, "dimension", c.environment.dimension);
            read(e, "discount", c.environment.discount);
        }
        if (j.contains("family")) {
            const json& f = j.at("family");
            check_keys(f, {"kind", "points_per_dim", "lower", "upper"}, "family");
            read(f, "kind", c.family.kind);
            read(f, "points_per_dim", c.family.points_per_dim);
            read(f, "lower", c.family.lower);
            read(f, "upper", c.family.upper);
        }
        if (j.contains("algorithm")) c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        if (j.contains("parameters")) {
            const json& p = j.at("parameters");
            check_keys(p, {"tol", "rvi_tol", "epsilon", "max_iterations", "searcher", "evaluator",
                           "exact_tol", "mc_rollouts", "mc_horizon", "cmaes", "t0", "model_parameter"},
                       "parameters");
            read(p, "tol", c.tol);
            read(p, "rvi_tol", c.rvi_tol);
            read(p, "epsilon", c.epsilon);
            read(p, "max_iterations", c.max_iterations);
            if (p.contains("searcher")) c.searcher = parse_searcher(p.at("searcher").get<std::string>());
            if (p.contains("evaluator")) c.evaluator = parse_evaluator(p.at("evaluator").get<std::string>());
            read(p, "exact_tol", c.exact_tol);
            read(p, "mc_rollouts", c.mc_rollouts);
            read(p, "mc_horizon", c.mc_horizon);
            read(p, "t0", c.t0);
            read(p, "model_parameter", c.model_parameter);
            if (p.contains("cmaes")) {
                const json& m = p.at("cmaes");
                check_keys(m, {"population", "generations", "mean", "std"}, "parameters.cmaes");
                read(m, "population", c.cmaes_population);
                read(m, "generations", c.cmaes_generations);
                read(m, "mean", c.cmaes_mean);
                read(m, "std", c.cmaes_std);
            }
        }
        read(j, "seed", c.seed);
        if (j.contains("output")) c.output_dir = j.at("output").get<std::string>();
        if (j.contains("scaling")) {
            const json& s = j.at("scaling");
            check_keys(s, {"family_sizes", "n_states", "n_actions", "discount", "repeats"}, "scaling");
            read(s, "family_sizes", c.scaling.family_sizes);
            read(s, "n_states", c.scaling.n_states);
            read(s, "n_actions", c.scaling.n_actions);
            read(s, "discount", c.scaling.discount);
            read(s, "repeats", c.scaling.repeats);
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config " + path.string());
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw UsageError("config " + path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path());
}

json config_to_json(const ExperimentConfig& c) {
    json env{{"builtin", c.environment.builtin}};
    if (c.environment.builtin == "random") {
        env["n_states"] = c.environment.n_states;
        env["n_actions"] = c.environment.n_actions;
        env["dimension"] = c.environment.dimension;
        env["discount"] = c.environment.discount;
    }
    if (c.environment.map_file) env["map_file"] = c.environment.map_file->string();
    if (c.environment.wind_zones) {
        json zones = json::array();
        for (const auto& z : *c.environment.wind_zones) zones.push_back({z.row, z.col, z.exponent});
        env["wind_zones"] = zones;
    }
    json family{{"kind", c.family.kind}, {"points_per_dim", c.family.points_per_dim}};
    if (c.family.lower) family["lower"] = *c.family.lower;
    if (c.family.upper) family["upper"] = *c.family.upper;
    json params{{"tol", c.tol},
                {"epsilon", c.epsilon},
                {"max_iterations", c.max_iterations},
                {"searcher", to_string(c.searcher)},
                {"evaluator", to_string(c.evaluator)},
                {"exact_tol", c.exact_tol},
                {"mc_rollouts", c.mc_rollouts},
                {"mc_horizon", c.mc_horizon},
                {"cmaes",
                 {{"population", c.cmaes_population},
                  {"generations", c.cmaes_generations},
                  {"mean", c.cmaes_mean},
                  {"std", c.cmaes_std}}}};
    if (c.rvi_tol) params["rvi_tol"] = *c.rvi_tol;
    if (c.t0) params["t0"] = *c.t0;
    if (c.model_parameter) params["model_parameter"] = *c.model_parameter;
    return json{{"environment", env},
                {"family", family},
                {"algorithm", to_string(c.algorithm)},
                {"parameters", params},
                {"seed", c.seed},
                {"output", c.output_dir.string()},
                {"scaling",
                 {{"family_sizes", c.scaling.family_sizes},
                  {"n_states", c.scaling.n_states},
                  {"n_actions", c.scaling.n_actions},
                  {"discount", c.scaling.discount},
                  {"repeats", c.scaling.repeats}}}};
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose) {
    // FNV-1a over the purpose tag, folded into the root seed
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char ch : purpose) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    return mix64(root ^ h);
}

// ---------------------------------------------------------------------------
// builders

ModelFamily build_family(const ExperimentConfig& config) {
    ModelFamily box = [&] {
        if (config.environment.builtin == "random") {
            ModelFamily f = random_family(derive_seed(config.seed, "environment"),
                                          config.environment.n_states, config.environment.n_actions,
                                          config.environment.dimension, config.environment.discount);
            if (!config.family.lower && !config.family.upper) return f;
            Parameter lo = config.family.lower.value_or(f.lower());
            Parameter hi = config.family.upper.value_or(f.upper());
            for (std::size_t d = 0; d < lo.size() && d < f.lower().size(); ++d) {
                if (lo[d] < f.lower()[d] || hi[d] > f.upper()[d]) {
                    throw UsageError("config: family box exceeds the random family's [0,1] box");
                }
            }
            return ModelFamily::continuous(
                "random", std::move(lo), std::move(hi),
                [f](std::span<const double> p) { return f.generate(p); });
        }
        const GridMap map = load_map(config.environment);
        const double lo = config.family.lower ? config.family.lower->at(0) : 0.0;
        const double hi = config.family.upper ? config.family.upper->at(0) : 0.5;
        return windy_walk_continuous_family(map, lo, hi);
    }();

    if (config.family.kind == "continuous") return box;
    const ModelFamily generator_source = box;
    return ModelFamily::discrete(
        box.name(), grid_parameters(box.lower(), box.upper(), config.family.points_per_dim),
        [generator_source](std::span<const double> p) { return generator_source.generate(p); });
}

DiscreteUncertaintySet build_search_set(const ExperimentConfig& config, const ModelFamily& family) {
    if (family.is_continuous()) return enumerate_grid(family, config.family.points_per_dim);
    return DiscreteUncertaintySet::from_family(family);
}

PolicyEvaluator make_evaluator(const ExperimentConfig& config) {
    if (config.evaluator == EvaluatorKind::monte_carlo) {
        return monte_carlo_evaluator(config.mc_rollouts, config.mc_horizon,
                                     derive_seed(config.seed, "monte-carlo"));
    }
    return exact_evaluator(config.exact_tol);
}

IwocsOptions iwocs_options(const ExperimentConfig& config) {
    IwocsOptions o;
    o.t0 = config.t0;
    o.max_iterations = config.max_iterations;
    o.epsilon = config.epsilon;
    o.searcher = config.searcher;
    o.grid_points_per_dim = config.family.points_per_dim;
    o.cmaes.population = config.cmaes_population;
    o.cmaes.generations = config.cmaes_generations;
    o.cmaes.initial_std = config.cmaes_std;
    o.cmaes.seed = derive_seed(config.seed, "cmaes");
    o.evaluator = make_evaluator(config);
    o.vi_tol = config.tol;
    return o;
}

namespace {

IwocsOptions options_for(const ExperimentConfig& config, const ModelFamily& family) {
    IwocsOptions o = iwocs_options(config);
    o.cmaes.initial_mean.assign(family.dimension(), config.cmaes_mean);
    return o;
}

void write_iwocs_outputs(const fs::path& dir, const IwocsResult& r) {
    std::ostringstream trace;
    write_trace_csv(trace, r);
    write_file(dir / "iwocs_trace.csv", trace.str());
    write_file(dir / "q.csv", q_csv(r.aggregate.combined()));
    write_file(dir / "value.csv", value_csv(greedy_values(r.aggregate.combined())));
    write_file(dir / "policy.csv", policy_csv(r.policy()));
}

json iwocs_results_json(const IwocsResult& r) {
    json iterations = json::array();
    for (const auto& it : r.trace) iterations.push_back(iteration_json(it));
    const auto& last = r.last();
    return json{{"status", to_string(r.status)},
                {"iterations", r.trace.size()},
                {"candidate_value", last.candidate_value},
                {"adversarial_value", last.adversarial_value},
                {"gap", last.gap},
                {"worst_parameter", last.worst_parameter},
                {"total_bellman_backups", r.total_bellman_backups()},
                {"trace", iterations}};
}

}  // namespace

// ---------------------------------------------------------------------------
// commands

json cmd_solve(const ExperimentConfig& config) {
    config.validate();
    const auto start = Clock::now();
    fs::create_directories(config.output_dir);
    const fs::path& dir = config.output_dir;
    json summary = base_summary(config, "solve");
    const ModelFamily family = build_family(config);

    switch (config.algorithm) {
        case Algorithm::vi: {
            const Parameter p = config.model_parameter.value_or(family.default_start());
            const TabularMdp mdp = family.generate(p);
            const auto vi = value_iteration(mdp, config.tol, default_max_iterations(config.tol, mdp.discount()));
            const DeterministicPolicy pi = greedy_policy(vi.q);
            write_file(dir / "value.csv", value_csv(vi.value));
            write_file(dir / "q.csv", q_csv(vi.q));
            write_file(dir / "policy.csv", policy_csv(pi));
            summary["results"] = {{"parameter", p},
                                  {"value_at_start", vi.value[mdp.start_state()]},
                                  {"iterations", vi.iterations},
                                  {"residual", vi.residual},
                                  {"converged", vi.converged}};
            break;
        }
        case Algorithm::rvi: {
            const DiscreteUncertaintySet set = build_search_set(config, family);
            const double tol = config.rvi_tol.value_or(config.tol);
            const auto report = robust_value_iteration(set, tol, rvi_max_iters(tol, set.model(0).discount()));
            std::ostringstream trace;
            write_trace_csv(trace, report);
            write_file(dir / "rvi_trace.csv", trace.str());
            write_file(dir / "value.csv", value_csv(report.robust_value));
            write_file(dir / "q.csv", q_csv(report.robust_q));
            write_file(dir / "policy.csv", policy_csv(greedy_policy(report.robust_q)));
            summary["results"] = {{"value_at_start", report.robust_value[set.model(0).start_state()]},
                                  {"iterations", report.iterations},
                                  {"converged", report.converged},
                                  {"family_size", set.size()}};
            break;
        }
        case Algorithm::iwocs: {
            const IwocsResult r = run_iwocs(family, options_for(config, family));
            write_iwocs_outputs(dir, r);
            if (config.searcher == SearcherKind::cmaes) {
                for (const auto& it : r.trace) {
                    std::ostringstream os;
                    write_history_csv(os, it.search_history);
                    write_file(dir / ("cmaes_history_iter" + std::to_string(it.iteration) + ".csv"),
                               os.str());
                }
            }
            summary["results"] = iwocs_results_json(r);
            break;
        }
    }
    summary["wall_time_seconds"] = seconds_since(start);
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    return summary;
}

json cmd_compare(const ExperimentConfig& config) {
    config.validate();
    const auto start = Clock::now();
    fs::create_directories(config.output_dir);
    const fs::path& dir = config.output_dir;
    json summary = base_summary(config, "compare");
    const ModelFamily family = build_family(config);
    const DiscreteUncertaintySet set = build_search_set(config, family);
    const StateIndex s0 = set.model(0).start_state();

    const double rvi_tol = config.rvi_tol.value_or(config.tol);
    const auto rvi_start = Clock::now();
    const RobustSolveReport rvi =
        robust_value_iteration(set, rvi_tol, rvi_max_iters(rvi_tol, set.model(0).discount()));
    const double rvi_seconds = seconds_since(rvi_start);
    const double v_rvi = rvi.robust_value[s0];

    const auto iwocs_start = Clock::now();
    const IwocsResult iw = run_iwocs(family, options_for(config, family));
    const double iwocs_seconds = seconds_since(iwocs_start);
    const double v_iwocs = iw.last().candidate_value;

    std::ostringstream os;
    os << "series,x,value_at_start,abs_gap_to_rvi\n";
    for (const auto& p : rvi.iterate_trace) {
        os << "rvi," << p.iteration << ',' << csv::number(p.value_at_start) << ','
           << csv::number(std::fabs(p.value_at_start - v_rvi)) << '\n';
    }
    std::size_t backups = 0;
    for (const auto& it : iw.trace) {
        backups += it.vi_iterations;
        os << "iwocs," << backups << ',' << csv::number(it.candidate_value) << ','
           << csv::number(std::fabs(it.candidate_value - v_rvi)) << '\n';
    }
    write_file(dir / "compare.csv", os.str());
    std::ostringstream rvi_trace;
    write_trace_csv(rvi_trace, rvi);
    write_file(dir / "rvi_trace.csv", rvi_trace.str());
    std::ostringstream iw_trace;
    write_trace_csv(iw_trace, iw);
    write_file(dir / "iwocs_trace.csv", iw_trace.str());

    summary["results"] = {{"rvi_value", v_rvi},
                          {"rvi_iterations", rvi.iterations},
                          {"rvi_converged", rvi.converged},
                          {"rvi_seconds", rvi_seconds},
                          {"iwocs_value", v_iwocs},
                          {"iwocs_seconds", iwocs_seconds},
                          {"iwocs", iwocs_results_json(iw)},
                          {"terminal_gap", std::fabs(v_iwocs - v_rvi)},
                          {"family_size", set.size()}};
    summary["wall_time_seconds"] = seconds_since(start);
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    return summary;
}

json cmd_scaling(const ExperimentConfig& config) {
    config.validate();
    const auto start = Clock::now();
    fs::create_directories(config.output_dir);
    const fs::path& dir = config.output_dir;
    json summary = base_summary(config, "scaling");
    const ScalingSpec& sc = config.scaling;
    const ModelFamily family = random_family(derive_seed(config.seed, "environment"), sc.n_states,
                                             sc.n_actions, 1, sc.discount);
    const std::size_t max_iters = default_max_iterations(config.tol, sc.discount);

    std::ostringstream os;
    os << "c,vi_seconds,rvi_seconds,iwocs_seconds,iwocs_iterations,iwocs_solve_seconds_per_iteration\n";
    json rows = json::array();
    for (std::size_t c : sc.family_sizes) {
        const DiscreteUncertaintySet set = [&] {
            if (c >= 2) return enumerate_grid(family, c);
            DiscreteUncertaintySet single;
            const Parameter mid = family.default_start();
            single.push_back(mid, family.generate(mid));
            return single;
        }();
        IwocsOptions opts;
        opts.max_iterations = config.max_iterations;
        opts.epsilon = config.epsilon;
        opts.vi_tol = config.tol;
        opts.evaluator = exact_evaluator(config.exact_tol);

        double vi_s = std::numeric_limits<double>::infinity();
        double rvi_s = vi_s;
        double iw_s = vi_s;
        double iw_solve = vi_s;
        std::size_t iw_iters = 0;
        for (std::size_t rep = 0; rep < sc.repeats; ++rep) {
            auto t = Clock::now();
            const auto vi = value_iteration(set.model(0), config.tol, max_iters);
            vi_s = std::min(vi_s, seconds_since(t));

            t = Clock::now();
            const auto rvi = robust_value_iteration(set, config.tol, max_iters);
            rvi_s = std::min(rvi_s, seconds_since(t));

            t = Clock::now();
            const IwocsResult r = run_iwocs(set, opts);
            iw_s = std::min(iw_s, seconds_since(t));
            iw_iters = r.trace.size();
            double solve = 0.0;
            for (const auto& it : r.trace) solve += it.solve_seconds;
            iw_solve = std::min(iw_solve, solve / static_cast<double>(r.trace.size()));
            (void)vi;
            (void)rvi;
        }
        os << c << ',' << csv::number(vi_s) << ',' << csv::number(rvi_s) << ','
           << csv::number(iw_s) << ',' << iw_iters << ',' << csv::number(iw_solve) << '\n';
        rows.push_back({{"c", c},
                        {"vi_seconds", vi_s},
                        {"rvi_seconds", rvi_s},
                        {"iwocs_seconds", iw_s},
                        {"iwocs_iterations", iw_iters},
                        {"iwocs_solve_seconds_per_iteration", iw_solve}});
    }
    write_file(dir / "scaling.csv", os.str());

    const double base_solve = rows.front()["iwocs_solve_seconds_per_iteration"].get<double>();
    double worst_ratio = 0.0;
    bool rvi_grows = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        worst_ratio = std::max(worst_ratio,
                               rows[i]["iwocs_solve_seconds_per_iteration"].get<double>() / base_solve);
        if (i > 0 && rows[i]["rvi_seconds"].get<double>() <= rows[i - 1]["rvi_seconds"].get<double>()) {
            rvi_grows = false;
        }
    }
    summary["results"] = {{"rows", rows},
                          {"rvi_time_increasing", rvi_grows},
                          {"max_iwocs_solve_ratio_to_first", worst_ratio}};
    summary["wall_time_seconds"] = seconds_since(start);
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    return summary;
}

json cmd_validate_map(const fs::path& map_file, const std::vector<WindZone>& wind_zones) {
    std::ifstream f(map_file);
    if (!f) throw UsageError("cannot read map file " + map_file.string());
    std::stringstream ss;
    ss << f.rdbuf();
    const GridMap map = GridMap::parse(ss.str(), wind_zones);
    const auto path = map.shortest_path_length();
    if (!path) throw UsageError("map: goal is not reachable from start");
    std::size_t walls = 0;
    for (std::size_t r = 0; r < map.height(); ++r) {
        for (std::size_t c = 0; c < map.width(); ++c) walls += map.at(r, c) == Cell::wall;
    }
    return json{{"width", map.width()},
                {"height", map.height()},
                {"states", map.width() * map.height()},
                {"walls", walls},
                {"start_state", map.start_state()},
                {"goal_state", map.goal_state()},
                {"wind_zones", map.wind_zones().size()},
                {"shortest_path_length", *path}};
}

}  // namespace rmdp::harness
