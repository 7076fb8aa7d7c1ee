#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the solver code except to read model tensors.

#include "rmdp/mdp.hpp"
#include "rmdp/uncertainty.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using rmdp::TabularMdp;

// Q(s,a) by direct summation, flat (s,a).
inline std::vector<double> backup_q(const TabularMdp& m, const std::vector<double>& v) {
    const std::size_t ns = m.n_states(), na = m.n_actions();
    std::vector<double> q(ns * na, 0.0);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t a = 0; a < na; ++a) {
            double acc = 0.0;
            for (std::size_t t = 0; t < ns; ++t)
                acc += m.transition(s, a, t) * (m.reward(s, a, t) + m.discount() * v[t]);
            q[s * na + a] = acc;
        }
    return q;
}

inline std::vector<double> max_rows(const std::vector<double>& q, std::size_t na) {
    std::vector<double> v(q.size() / na);
    for (std::size_t s = 0; s < v.size(); ++s)
        v[s] = *std::max_element(q.begin() + s * na, q.begin() + (s + 1) * na);
    return v;
}

// Fixed number of plain backups from zero.
inline std::vector<double> iterate_vi(const TabularMdp& m, std::size_t n) {
    std::vector<double> v(m.n_states(), 0.0);
    for (std::size_t i = 0; i < n; ++i) v = max_rows(backup_q(m, v), m.n_actions());
    return v;
}

// Solves (I - gamma T^pi) V = r^pi densely.
inline Eigen::VectorXd policy_value(const TabularMdp& m, const std::vector<std::size_t>& pi) {
    const auto n = static_cast<Eigen::Index>(m.n_states());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (Eigen::Index s = 0; s < n; ++s) {
        for (Eigen::Index t = 0; t < n; ++t) {
            const double p = m.transition(s, pi[s], t);
            a(s, t) -= m.discount() * p;
            r(s) += p * m.reward(s, pi[s], t);
        }
    }
    return a.partialPivLu().solve(r);
}

// Shortest S->G path on an ASCII grid, -1 if unreachable.
inline int bfs(const std::vector<std::string>& rows) {
    const int h = static_cast<int>(rows.size()), w = static_cast<int>(rows[0].size());
    std::vector<int> d(h * w, -1);
    std::deque<int> q;
    int goal = -1;
    for (int i = 0; i < h * w; ++i) {
        if (rows[i / w][i % w] == 'S') { d[i] = 0; q.push_back(i); }
        if (rows[i / w][i % w] == 'G') goal = i;
    }
    while (!q.empty()) {
        int c = q.front();
        q.pop_front();
        int r = c / w, k = c % w;
        int dr[] = {-1, 1, 0, 0}, dk[] = {0, 0, 1, -1};
        for (int i = 0; i < 4; ++i) {
            int nr = r + dr[i], nk = k + dk[i];
            if (nr < 0 || nk < 0 || nr >= h || nk >= w || rows[nr][nk] == '#') continue;
            if (d[nr * w + nk] >= 0) continue;
            d[nr * w + nk] = d[c] + 1;
            q.push_back(nr * w + nk);
        }
    }
    return goal < 0 ? -1 : d[goal];
}

// Enumerates every mixed-index vector in [0,base)^len.
template <class F>
void for_each_index(std::size_t len, std::size_t base, F&& f) {
    std::vector<std::size_t> idx(len, 0);
    while (true) {
        f(idx);
        std::size_t k = 0;
        while (k < len && ++idx[k] == base) idx[k++] = 0;
        if (k == len) return;
    }
}

// Model assembled from per-(s,a) choices among the set members.
inline TabularMdp product_kernel(const rmdp::DiscreteUncertaintySet& set,
                                 const std::vector<std::size_t>& choice) {
    const TabularMdp& m0 = set.model(0);
    const std::size_t ns = m0.n_states(), na = m0.n_actions();
    std::vector<double> t(ns * na * ns), r(ns * na * ns);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t a = 0; a < na; ++a) {
            const TabularMdp& m = set.model(choice[s * na + a]);
            for (std::size_t x = 0; x < ns; ++x) {
                t[(s * na + a) * ns + x] = m.transition(s, a, x);
                r[(s * na + a) * ns + x] = m.reward(s, a, x);
            }
        }
    return TabularMdp(ns, na, t, r, m0.discount(), m0.start_state(), m0.absorbing());
}

struct SaddleValues {
    double max_min;
    double min_max;
};

// max over deterministic policies of min over product kernels, and the
// reverse, of the start-state value.
inline SaddleValues saddle(const rmdp::DiscreteUncertaintySet& set) {
    const TabularMdp& m0 = set.model(0);
    const std::size_t ns = m0.n_states(), na = m0.n_actions();
    std::vector<TabularMdp> kernels;
    for_each_index(ns * na, set.size(),
                   [&](const std::vector<std::size_t>& c) { kernels.push_back(product_kernel(set, c)); });
    std::vector<std::vector<std::size_t>> policies;
    for_each_index(ns, na, [&](const std::vector<std::size_t>& p) { policies.push_back(p); });

    std::vector<std::vector<double>> val(policies.size(), std::vector<double>(kernels.size()));
    for (std::size_t p = 0; p < policies.size(); ++p)
        for (std::size_t k = 0; k < kernels.size(); ++k)
            val[p][k] = policy_value(kernels[k], policies[p])(m0.start_state());

    double max_min = -std::numeric_limits<double>::infinity();
    for (const auto& row : val) max_min = std::max(max_min, *std::min_element(row.begin(), row.end()));
    double min_max = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < kernels.size(); ++k) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < policies.size(); ++p) best = std::max(best, val[p][k]);
        min_max = std::min(min_max, best);
    }
    return {max_min, min_max};
}

// Hand-rolled generators.

inline std::vector<double> random_row(std::mt19937_64& rng, std::size_t n, bool sparse) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> row(n);
    double sum = 0.0;
    for (auto& x : row) {
        x = (sparse && u(rng) < 0.4) ? 0.0 : u(rng) + 1e-3;
        sum += x;
    }
    if (sum == 0.0) {
        row[0] = 1.0;
        sum = 1.0;
    }
    for (auto& x : row) x /= sum;
    return row;
}

struct MdpShape {
    std::size_t n_states;
    std::size_t n_actions;
    double discount;
    bool absorbing_last = false;  // make the last state an absorbing sink
};

inline MdpShape random_shape(std::mt19937_64& rng, std::size_t max_states, std::size_t max_actions) {
    std::uniform_int_distribution<std::size_t> s(1, max_states), a(1, max_actions);
    std::uniform_real_distribution<double> g(0.0, 0.97);
    std::bernoulli_distribution coin(0.3);
    MdpShape shape{s(rng), a(rng), g(rng), false};
    shape.absorbing_last = shape.n_states > 1 && coin(rng);
    return shape;
}

// Random MDP; rewards optionally shared (pass a non-empty vector).
inline TabularMdp random_mdp(std::mt19937_64& rng, const MdpShape& sh,
                             std::vector<double> reward = {}) {
    const std::size_t ns = sh.n_states, na = sh.n_actions;
    std::uniform_real_distribution<double> r(-1.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    const bool sparse = coin(rng);
    std::vector<double> t(ns * na * ns);
    if (reward.empty()) {
        reward.resize(ns * na * ns);
        for (auto& x : reward) x = r(rng);
    }
    std::vector<bool> absorbing(ns, false);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t a = 0; a < na; ++a) {
            const bool sink = sh.absorbing_last && s + 1 == ns;
            auto row = sink ? std::vector<double>(ns, 0.0) : random_row(rng, ns, sparse);
            if (sink) row[s] = 1.0;
            std::copy(row.begin(), row.end(), t.begin() + (s * na + a) * ns);
            if (sink) std::fill_n(reward.begin() + (s * na + a) * ns, ns, 0.0);
        }
    if (sh.absorbing_last) absorbing[ns - 1] = true;
    return TabularMdp(ns, na, std::move(t), std::move(reward), sh.discount, 0, absorbing);
}

// c models sharing shape, start state and rewards, differing in kernels.
inline rmdp::DiscreteUncertaintySet random_set(std::mt19937_64& rng, const MdpShape& sh,
                                               std::size_t c) {
    rmdp::DiscreteUncertaintySet set;
    std::vector<double> reward;
    for (std::size_t j = 0; j < c; ++j) {
        TabularMdp m = random_mdp(rng, sh, reward);
        if (reward.empty()) reward = m.reward_data();
        set.push_back({static_cast<double>(j)}, std::move(m));
    }
    return set;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

inline double sup_dist(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
    return d;
}

}  // namespace oracle
