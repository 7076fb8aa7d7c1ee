#pragma once

// Benchmark families: the windy-walk gridworld and random parameterized MDPs.

#include "rmdp/mdp.hpp"
#include "rmdp/uncertainty.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rmdp {

enum class Cell : char { free = '.', wall = '#', start = 'S', goal = 'G' };

/// A windy cell: the agent is blown one cell west with probability alpha^exponent.
struct WindZone {
    std::size_t row = 0;
    std::size_t col = 0;
    int exponent = 1;

    bool operator==(const WindZone&) const = default;
};

/**
 * Rectangular grid read from ASCII ('#' wall, '.' free, 'S' start, 'G' goal),
 * one text line per row. Validation requires exactly one start and one goal,
 * equal-length rows, and wind zones on free cells with positive exponents.
 */
class GridMap {
public:
    GridMap(std::size_t width, std::size_t height, std::vector<Cell> cells,
            std::vector<WindZone> wind_zones);

    /// Throws UsageError on malformed input.
    static GridMap parse(std::string_view ascii, std::vector<WindZone> wind_zones = {});

    std::string to_ascii() const;

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    Cell at(std::size_t row, std::size_t col) const { return cells_.at(row * width_ + col); }
    const std::vector<WindZone>& wind_zones() const noexcept { return wind_zones_; }

    std::size_t state_of(std::size_t row, std::size_t col) const { return row * width_ + col; }
    std::size_t start_state() const noexcept { return start_; }
    std::size_t goal_state() const noexcept { return goal_; }

    /// Wind exponent at a cell, if it lies in a zone.
    std::optional<int> wind_exponent(std::size_t row, std::size_t col) const;

    /// Fewest deterministic moves from start to goal, or nullopt if unreachable.
    std::optional<std::size_t> shortest_path_length() const;

    bool operator==(const GridMap&) const = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<Cell> cells_;
    std::vector<WindZone> wind_zones_;
    std::size_t start_ = 0;
    std::size_t goal_ = 0;
};

/// Actions in index order.
enum class Move : std::size_t { north = 0, south = 1, east = 2, west = 3 };
inline constexpr std::size_t kWindyWalkActions = 4;
inline constexpr double kWindyWalkDiscount = 0.95;

/// Shipped 6x6 map: three west-east corridors with wind exponents 1, 3, 6.
GridMap default_windy_walk_map();
std::string_view default_windy_walk_ascii();
std::vector<WindZone> default_windy_walk_zones();

/**
 * Windy-walk MDP, one state per grid cell (walls included, as unreachable
 * absorbing states). Moves are deterministic outside wind zones and blocked
 * moves leave the agent in place. In a zone with exponent k and p = alpha^k:
 * W goes west; N, S and E take their intended move with probability 1 - p and
 * are blown west with probability p. Reward is -1 per step outside the goal,
 * which is absorbing with reward 0. Throws UsageError unless 0 <= alpha <= 0.5.
 */
TabularMdp windy_walk(const GridMap& map, double alpha, double discount = kWindyWalkDiscount);

/// Discrete family over `points` uniformly spaced alphas in [0, 0.5].
ModelFamily windy_walk_family(const GridMap& map, std::size_t points = 25);

/// Continuous family over alpha in [lower, upper] (within [0, 0.5]).
ModelFamily windy_walk_continuous_family(const GridMap& map, double lower = 0.0,
                                         double upper = 0.5);

/**
 * Random continuous family over [0,1]^dimension. The generator blends a
 * random base kernel with `dimension` random perturbation kernels,
 * T(psi) proportional to base + sum_k psi_k K_k, and renormalizes each row.
 * Rewards are drawn once in [-1, 1] and do not depend on psi. No absorbing
 * states; discount 0.9; start state 0.
 */
ModelFamily random_family(std::uint64_t seed, std::size_t n_states, std::size_t n_actions,
                          std::size_t dimension, double discount = 0.9);

}  // namespace rmdp
