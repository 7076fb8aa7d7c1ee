#pragma once

// Experiment configuration and the solve / compare / scaling / validate-map
// commands behind the rmdp CLI.
//
// Precedence: built-in defaults < config file < command-line flags.

#include "rmdp/cmaes.hpp"
#include "rmdp/envs.hpp"
#include "rmdp/iwocs.hpp"
#include "rmdp/uncertainty.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rmdp::harness {

enum class Algorithm { vi, rvi, iwocs };
enum class EvaluatorKind { exact, monte_carlo };

struct EnvironmentSpec {
    /// "windy-walk" or "random"
    std::string builtin = "windy-walk";
    /// Windy-walk only: ASCII map file instead of the shipped map.
    std::optional<std::filesystem::path> map_file;
    /// Windy-walk only: overrides the default zones (required with map_file).
    std::optional<std::vector<WindZone>> wind_zones;
    /// Random only.
    std::size_t n_states = 10;
    std::size_t n_actions = 3;
    std::size_t dimension = 1;
    double discount = 0.9;
};

struct FamilySpec {
    /// "grid": discrete family on a uniform grid; "continuous": the box itself.
    std::string kind = "grid";
    std::size_t points_per_dim = 25;
    std::optional<Parameter> lower;
    std::optional<Parameter> upper;
};

struct ScalingSpec {
    std::vector<std::size_t> family_sizes{5, 25, 125};
    std::size_t n_states = 60;
    std::size_t n_actions = 4;
    double discount = 0.95;
    std::size_t repeats = 3;
};

struct ExperimentConfig {
    EnvironmentSpec environment;
    FamilySpec family;
    Algorithm algorithm = Algorithm::iwocs;

    double tol = 1e-3;               // VI tolerance (also IWOCS inner solves)
    std::optional<double> rvi_tol;   // defaults to tol
    double epsilon = 1e-2;
    std::size_t max_iterations = 25;
    SearcherKind searcher = SearcherKind::grid;
    EvaluatorKind evaluator = EvaluatorKind::exact;
    double exact_tol = 1e-9;
    std::size_t mc_rollouts = 300;
    std::size_t mc_horizon = 10'000;
    std::size_t cmaes_population = 100;
    std::size_t cmaes_generations = 6;
    double cmaes_mean = 0.5;
    double cmaes_std = 0.5;
    std::optional<Parameter> t0;
    /// Model solved by `vi`; family default start when unset.
    std::optional<Parameter> model_parameter;

    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "out";
    ScalingSpec scaling;

    /// Throws UsageError on inconsistent settings.
    void validate() const;
};

/// Strict parse: unknown keys anywhere raise UsageError. Relative map paths
/// resolve against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

Algorithm parse_algorithm(std::string_view name);
SearcherKind parse_searcher(std::string_view name);
EvaluatorKind parse_evaluator(std::string_view name);
std::string_view to_string(Algorithm algorithm);
std::string_view to_string(EvaluatorKind kind);

/// Independent seed for a named consumer of the root seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose);

/// Builds the environment's continuous family (box from the family spec or
/// the environment default), then discretizes it if family.kind == "grid".
ModelFamily build_family(const ExperimentConfig& config);

/// Discrete search set: the members of a grid family, or the grid over a
/// continuous family at points_per_dim.
DiscreteUncertaintySet build_search_set(const ExperimentConfig& config, const ModelFamily& family);

IwocsOptions iwocs_options(const ExperimentConfig& config);
PolicyEvaluator make_evaluator(const ExperimentConfig& config);

/// Each command writes its CSVs and summary.json into config.output_dir and
/// returns the summary. CSV bodies depend only on the config; timings are
/// confined to summary.json (and the scaling CSV, which is a timing report).
nlohmann::json cmd_solve(const ExperimentConfig& config);
nlohmann::json cmd_compare(const ExperimentConfig& config);
nlohmann::json cmd_scaling(const ExperimentConfig& config);

/// Parses and validates a map; returns a JSON description. Throws UsageError.
nlohmann::json cmd_validate_map(const std::filesystem::path& map_file,
                                const std::vector<WindZone>& wind_zones);

std::vector<WindZone> parse_wind_zones(const nlohmann::json& j);

}  // namespace rmdp::harness
