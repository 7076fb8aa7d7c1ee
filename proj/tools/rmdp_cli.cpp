// rmdp: command-line front end for the robust MDP solvers.

#include "rmdp/errors.hpp"
#include "rmdp/harness.hpp"
#include "rmdp/simd.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace rmdp;
using namespace rmdp::harness;

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string algo;
    std::string searcher;
    std::string evaluator;
};

void add_common(CLI::App* cmd, Overrides& o, bool with_algo) {
    cmd->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "root random seed");
    cmd->add_option("--out", o.out, "output directory");
    if (with_algo) cmd->add_option("--algo", o.algo, "vi, rvi or iwocs");
    cmd->add_option("--searcher", o.searcher,
                    "worst-case searcher: grid or cmaes (cmaes switches the family to continuous)");
    cmd->add_option("--evaluator", o.evaluator, "policy evaluator: exact or mc");
}

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (!o.out.empty()) c.output_dir = o.out;
    if (!o.algo.empty()) c.algorithm = parse_algorithm(o.algo);
    if (!o.searcher.empty()) {
        c.searcher = parse_searcher(o.searcher);
        if (c.searcher == SearcherKind::cmaes) c.family.kind = "continuous";
    }
    if (!o.evaluator.empty()) c.evaluator = parse_evaluator(o.evaluator);
    c.validate();
    return c;
}

void print_brief(const nlohmann::json& summary) {
    const auto& r = summary.at("results");
    nlohmann::json brief;
    for (const char* key : {"value_at_start", "status", "iterations", "candidate_value",
                            "adversarial_value", "gap", "rvi_value", "iwocs_value", "terminal_gap",
                            "rvi_time_increasing", "max_iwocs_solve_ratio_to_first"}) {
        if (r.contains(key)) brief[key] = r.at(key);
    }
    brief["output"] = summary.at("config").at("output");
    std::cout << brief.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust tabular MDP solvers: value iteration, robust value iteration and IWOCS"};
    app.require_subcommand(1);
    std::string simd_choice;
    app.add_option("--simd", simd_choice, "kernel set: scalar, avx2 or neon (default: best available)");

    Overrides solve_o;
    Overrides compare_o;
    Overrides scaling_o;
    auto* solve = app.add_subcommand("solve", "solve one experiment with --algo");
    add_common(solve, solve_o, true);
    auto* compare = app.add_subcommand("compare", "run RVI and IWOCS on the same family");
    add_common(compare, compare_o, false);
    auto* scaling = app.add_subcommand("scaling", "time VI, RVI and IWOCS against family size");
    add_common(scaling, scaling_o, false);

    std::string map_file;
    std::string zones_file;
    auto* validate = app.add_subcommand("validate-map", "check an ASCII map and describe it");
    validate->add_option("map", map_file, "ASCII map file")->required()->check(CLI::ExistingFile);
    validate->add_option("--zones", zones_file, "JSON file with [[row, col, exponent], ...]")
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!simd_choice.empty()) {
            if (simd_choice == "scalar") simd::set_active_isa(simd::Isa::scalar);
            else if (simd_choice == "avx2") simd::set_active_isa(simd::Isa::avx2);
            else if (simd_choice == "neon") simd::set_active_isa(simd::Isa::neon);
            else throw UsageError("unknown --simd value '" + simd_choice + "'");
        }
        if (*solve) print_brief(cmd_solve(resolve(solve_o)));
        if (*compare) print_brief(cmd_compare(resolve(compare_o)));
        if (*scaling) print_brief(cmd_scaling(resolve(scaling_o)));
        if (*validate) {
            std::vector<WindZone> zones;
            if (!zones_file.empty()) {
                std::ifstream f(zones_file);
                zones = parse_wind_zones(nlohmann::json::parse(f));
            }
            std::cout << cmd_validate_map(map_file, zones).dump(2) << '\n';
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
