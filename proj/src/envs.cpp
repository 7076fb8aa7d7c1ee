#include "rmdp/envs.hpp"

#include "rmdp/errors.hpp"
#include "rmdp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <string>

namespace rmdp {

namespace {

constexpr std::string_view kDefaultMap =
    "S....G\n"
    ".###..\n"
    "......\n"
    ".###..\n"
    "......\n"
    "......\n";

Cell cell_from_char(char c, std::size_t row, std::size_t col) {
    switch (c) {
        case '.': return Cell::free;
        case '#': return Cell::wall;
        case 'S': return Cell::start;
        case 'G': return Cell::goal;
        default:
            throw UsageError("map: unexpected character '" + std::string(1, c) + "' at row " +
                             std::to_string(row) + ", column " + std::to_string(col));
    }
}

}  // namespace

GridMap::GridMap(std::size_t width, std::size_t height, std::vector<Cell> cells,
                 std::vector<WindZone> wind_zones)
    : width_(width), height_(height), cells_(std::move(cells)), wind_zones_(std::move(wind_zones)) {
    if (width_ == 0 || height_ == 0 || cells_.size() != width_ * height_) {
        throw UsageError("map: cell count does not match width x height");
    }
    std::size_t starts = 0;
    std::size_t goals = 0;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        if (cells_[i] == Cell::start) {
            ++starts;
            start_ = i;
        } else if (cells_[i] == Cell::goal) {
            ++goals;
            goal_ = i;
        }
    }
    if (starts != 1 || goals != 1) {
        throw UsageError("map: needs exactly one 'S' and one 'G' (found " + std::to_string(starts) +
                         " and " + std::to_string(goals) + ")");
    }
    for (std::size_t i = 0; i < wind_zones_.size(); ++i) {
        const WindZone& z = wind_zones_[i];
        if (z.row >= height_ || z.col >= width_) {
            throw UsageError("map: wind zone (" + std::to_string(z.row) + "," +
                             std::to_string(z.col) + ") is outside the grid");
        }
        if (at(z.row, z.col) != Cell::free) {
            throw UsageError("map: wind zone (" + std::to_string(z.row) + "," +
                             std::to_string(z.col) + ") is not a free cell");
        }
        if (z.exponent < 1) {
            throw UsageError("map: wind exponent must be >= 1");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (wind_zones_[j].row == z.row && wind_zones_[j].col == z.col) {
                throw UsageError("map: duplicate wind zone at (" + std::to_string(z.row) + "," +
                                 std::to_string(z.col) + ")");
            }
        }
    }
}

GridMap GridMap::parse(std::string_view ascii, std::vector<WindZone> wind_zones) {
    std::vector<Cell> cells;
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t pos = 0;
    while (pos < ascii.size()) {
        std::size_t end = ascii.find('\n', pos);
        if (end == std::string_view::npos) end = ascii.size();
        std::string_view line = ascii.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = end + 1;
        if (line.empty()) continue;
        if (width == 0) {
            width = line.size();
        } else if (line.size() != width) {
            throw UsageError("map: row " + std::to_string(height) + " has " +
                             std::to_string(line.size()) + " cells, expected " +
                             std::to_string(width));
        }
        for (std::size_t col = 0; col < line.size(); ++col) {
            cells.push_back(cell_from_char(line[col], height, col));
        }
        ++height;
    }
    if (height == 0) throw UsageError("map: empty");
    return GridMap(width, height, std::move(cells), std::move(wind_zones));
}

std::string GridMap::to_ascii() const {
    std::string out;
    out.reserve((width_ + 1) * height_);
    for (std::size_t r = 0; r < height_; ++r) {
        for (std::size_t c = 0; c < width_; ++c) out.push_back(static_cast<char>(at(r, c)));
        out.push_back('\n');
    }
    return out;
}

std::optional<int> GridMap::wind_exponent(std::size_t row, std::size_t col) const {
    for (const auto& z : wind_zones_) {
        if (z.row == row && z.col == col) return z.exponent;
    }
    return std::nullopt;
}

std::optional<std::size_t> GridMap::shortest_path_length() const {
    std::vector<std::size_t> dist(cells_.size(), std::numeric_limits<std::size_t>::max());
    std::deque<std::size_t> queue{start_};
    dist[start_] = 0;
    while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        if (cur == goal_) return dist[cur];
        const std::size_t r = cur / width_;
        const std::size_t c = cur % width_;
        const std::pair<long, long> steps[] = {{-1, 0}, {1, 0}, {0, 1}, {0, -1}};
        for (auto [dr, dc] : steps) {
            const long nr = static_cast<long>(r) + dr;
            const long nc = static_cast<long>(c) + dc;
            if (nr < 0 || nc < 0 || nr >= static_cast<long>(height_) || nc >= static_cast<long>(width_))
                continue;
            const std::size_t next = state_of(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc));
            if (cells_[next] == Cell::wall || dist[next] != std::numeric_limits<std::size_t>::max())
                continue;
            dist[next] = dist[cur] + 1;
            queue.push_back(next);
        }
    }
    return std::nullopt;
}

std::string_view default_windy_walk_ascii() { return kDefaultMap; }

std::vector<WindZone> default_windy_walk_zones() {
    std::vector<WindZone> zones;
    for (std::size_t col = 1; col <= 3; ++col) zones.push_back({0, col, 1});
    for (std::size_t col = 1; col <= 3; ++col) zones.push_back({2, col, 3});
    for (std::size_t row = 4; row <= 5; ++row) {
        for (std::size_t col = 1; col <= 3; ++col) zones.push_back({row, col, 6});
    }
    return zones;
}

GridMap default_windy_walk_map() {
    return GridMap::parse(kDefaultMap, default_windy_walk_zones());
}

TabularMdp windy_walk(const GridMap& map, double alpha, double discount) {
    if (!(alpha >= 0.0 && alpha <= 0.5)) {
        throw UsageError("windy_walk: alpha must lie in [0, 0.5], got " + std::to_string(alpha));
    }
    const std::size_t w = map.width();
    const std::size_t h = map.height();
    const std::size_t ns = w * h;
    const std::size_t na = kWindyWalkActions;
    std::vector<double> transition(ns * na * ns, 0.0);
    std::vector<double> reward(ns * na * ns, 0.0);
    std::vector<bool> absorbing(ns, false);

    auto target = [&](std::size_t r, std::size_t c, Move m) {
        long nr = static_cast<long>(r);
        long nc = static_cast<long>(c);
        switch (m) {
            case Move::north: --nr; break;
            case Move::south: ++nr; break;
            case Move::east: ++nc; break;
            case Move::west: --nc; break;
        }
        if (nr < 0 || nc < 0 || nr >= static_cast<long>(h) || nc >= static_cast<long>(w) ||
            map.at(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc)) == Cell::wall) {
            return map.state_of(r, c);
        }
        return map.state_of(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc));
    };

    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t s = map.state_of(r, c);
            const Cell cell = map.at(r, c);
            if (cell == Cell::goal || cell == Cell::wall) {
                absorbing[s] = true;
                for (std::size_t a = 0; a < na; ++a) transition[(s * na + a) * ns + s] = 1.0;
                continue;
            }
            const auto exponent = map.wind_exponent(r, c);
            const double push = exponent ? std::pow(alpha, *exponent) : 0.0;
            const std::size_t west = target(r, c, Move::west);
            for (std::size_t a = 0; a < na; ++a) {
                const auto m = static_cast<Move>(a);
                double* row = transition.data() + (s * na + a) * ns;
                if (m == Move::west) {
                    row[west] += 1.0;
                } else {
                    row[target(r, c, m)] += 1.0 - push;
                    row[west] += push;
                }
                std::fill_n(reward.data() + (s * na + a) * ns, ns, -1.0);
            }
        }
    }
    return TabularMdp(ns, na, std::move(transition), std::move(reward), discount,
                      map.start_state(), std::move(absorbing));
}

ModelFamily windy_walk_family(const GridMap& map, std::size_t points) {
    return ModelFamily::discrete(
        "windy-walk", grid_parameters({0.0}, {0.5}, points),
        [map](std::span<const double> p) { return windy_walk(map, p[0]); });
}

ModelFamily windy_walk_continuous_family(const GridMap& map, double lower, double upper) {
    if (!(lower >= 0.0 && upper <= 0.5 && lower <= upper)) {
        throw UsageError("windy-walk alpha box must lie within [0, 0.5]");
    }
    return ModelFamily::continuous(
        "windy-walk", {lower}, {upper},
        [map](std::span<const double> p) { return windy_walk(map, p[0]); });
}

namespace {

struct RandomFamilyData {
    std::size_t n_states;
    std::size_t n_actions;
    std::size_t dimension;
    double discount;
    std::vector<double> base;                       // (s,a,s')
    std::vector<std::vector<double>> perturbations;  // per dimension, (s,a,s')
    std::vector<double> reward;
};

}  // namespace

ModelFamily random_family(std::uint64_t seed, std::size_t n_states, std::size_t n_actions,
                          std::size_t dimension, double discount) {
    if (n_states == 0 || n_actions == 0 || dimension == 0) {
        throw UsageError("random_family: sizes must be >= 1");
    }
    auto data = std::make_shared<RandomFamilyData>();
    data->n_states = n_states;
    data->n_actions = n_actions;
    data->dimension = dimension;
    data->discount = discount;
    const std::size_t n = n_states * n_actions * n_states;

    CounterRng rng = CounterRng::stream(seed, 0);
    data->base.resize(n);
    // strictly positive base keeps every row well defined for any psi
    for (double& x : data->base) x = 0.05 + rng.uniform();
    data->perturbations.assign(dimension, std::vector<double>(n));
    for (auto& k : data->perturbations) {
        for (double& x : k) x = 4.0 * rng.uniform() * rng.uniform();
    }
    data->reward.resize(n);
    for (double& x : data->reward) x = 2.0 * rng.uniform() - 1.0;

    auto generator = [data = std::shared_ptr<const RandomFamilyData>(data)](
                         std::span<const double> psi) {
        const std::size_t ns = data->n_states;
        const std::size_t rows = ns * data->n_actions;
        std::vector<double> t(data->base);
        for (std::size_t d = 0; d < data->dimension; ++d) {
            const auto& k = data->perturbations[d];
            for (std::size_t i = 0; i < t.size(); ++i) t[i] += psi[d] * k[i];
        }
        for (std::size_t row = 0; row < rows; ++row) {
            double* p = t.data() + row * ns;
            double sum = 0.0;
            for (std::size_t j = 0; j < ns; ++j) sum += p[j];
            for (std::size_t j = 0; j < ns; ++j) p[j] /= sum;
        }
        return TabularMdp(ns, data->n_actions, std::move(t), data->reward, data->discount, 0,
                          std::vector<bool>(ns, false));
    };
    return ModelFamily::continuous("random", Parameter(dimension, 0.0), Parameter(dimension, 1.0),
                                   std::move(generator));
}

}  // namespace rmdp
