#include "rmdp/uncertainty.hpp"

#include "rmdp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rmdp {

ModelFamily ModelFamily::discrete(std::string name, std::vector<Parameter> parameters,
                                  MdpGenerator generator) {
    if (parameters.empty()) {
        throw UsageError("discrete family '" + name + "' has no parameters");
    }
    const std::size_t dim = parameters.front().size();
    for (const auto& p : parameters) {
        if (p.size() != dim) {
            throw UsageError("discrete family '" + name + "' mixes parameter dimensions");
        }
    }
    if (!generator) {
        throw UsageError("family '" + name + "' has no generator");
    }
    ModelFamily f;
    f.kind_ = Kind::discrete;
    f.name_ = std::move(name);
    f.dimension_ = dim;
    f.parameters_ = std::move(parameters);
    f.generator_ = std::move(generator);
    return f;
}

ModelFamily ModelFamily::continuous(std::string name, Parameter lower, Parameter upper,
                                    MdpGenerator generator) {
    if (lower.empty() || lower.size() != upper.size()) {
        throw UsageError("continuous family '" + name + "' needs matching non-empty bounds");
    }
    for (std::size_t d = 0; d < lower.size(); ++d) {
        if (!std::isfinite(lower[d]) || !std::isfinite(upper[d]) || lower[d] > upper[d]) {
            throw UsageError("continuous family '" + name + "' has an invalid box");
        }
    }
    if (!generator) {
        throw UsageError("family '" + name + "' has no generator");
    }
    ModelFamily f;
    f.kind_ = Kind::continuous;
    f.name_ = std::move(name);
    f.dimension_ = lower.size();
    f.lower_ = std::move(lower);
    f.upper_ = std::move(upper);
    f.generator_ = std::move(generator);
    return f;
}

const std::vector<Parameter>& ModelFamily::parameters() const {
    if (kind_ != Kind::discrete) {
        throw UsageError("family '" + name_ + "' is continuous; it has no parameter list");
    }
    return parameters_;
}

const Parameter& ModelFamily::lower() const {
    if (kind_ != Kind::continuous) {
        throw UsageError("family '" + name_ + "' is discrete; it has no box");
    }
    return lower_;
}

const Parameter& ModelFamily::upper() const {
    if (kind_ != Kind::continuous) {
        throw UsageError("family '" + name_ + "' is discrete; it has no box");
    }
    return upper_;
}

bool ModelFamily::contains(std::span<const double> parameter) const {
    if (parameter.size() != dimension_) {
        return false;
    }
    if (kind_ == Kind::continuous) {
        for (std::size_t d = 0; d < dimension_; ++d) {
            if (!(parameter[d] >= lower_[d] && parameter[d] <= upper_[d])) {
                return false;
            }
        }
        return true;
    }
    return std::any_of(parameters_.begin(), parameters_.end(), [&](const Parameter& p) {
        return std::equal(p.begin(), p.end(), parameter.begin());
    });
}

Parameter ModelFamily::default_start() const {
    if (kind_ == Kind::discrete) {
        return parameters_.front();
    }
    Parameter mid(dimension_);
    for (std::size_t d = 0; d < dimension_; ++d) {
        mid[d] = lower_[d] + 0.5 * (upper_[d] - lower_[d]);
    }
    return mid;
}

TabularMdp ModelFamily::generate(std::span<const double> parameter) const {
    if (!contains(parameter)) {
        throw UsageError("parameter outside the domain of family '" + name_ + "'");
    }
    return generator_(parameter);
}

DiscreteUncertaintySet::DiscreteUncertaintySet(std::vector<Parameter> parameters,
                                               std::vector<TabularMdp> models) {
    if (parameters.size() != models.size()) {
        throw UsageError("uncertainty set: one parameter per model required");
    }
    for (std::size_t i = 0; i < models.size(); ++i) {
        push_back(std::move(parameters[i]), std::move(models[i]));
    }
}

DiscreteUncertaintySet DiscreteUncertaintySet::from_family(const ModelFamily& family) {
    DiscreteUncertaintySet set;
    for (const auto& p : family.parameters()) {
        set.push_back(p, family.generate(p));
    }
    return set;
}

void DiscreteUncertaintySet::push_back(Parameter parameter, TabularMdp model) {
    if (!models_.empty()) {
        if (!models_.front()->same_structure(model)) {
            throw UsageError(
                "uncertainty set members must share states, actions, discount, start state "
                "and absorbing flags");
        }
        if (parameter.size() != parameters_.front().size()) {
            throw UsageError("uncertainty set members must share the parameter dimension");
        }
    }
    parameters_.push_back(std::move(parameter));
    models_.push_back(std::make_shared<const TabularMdp>(std::move(model)));
}

RectangularClosure::RectangularClosure(const DiscreteUncertaintySet& set) {
    if (set.empty()) {
        throw UsageError("rectangular closure of an empty set");
    }
    const TabularMdp& first = set.model(0);
    n_states_ = first.n_states();
    n_actions_ = first.n_actions();
    n_candidates_ = set.size();
    discount_ = first.discount();
    start_state_ = first.start_state();
    for (std::size_t j = 1; j < set.size(); ++j) {
        if (!set.model(j).same_structure(first)) {
            throw UsageError("rectangular closure: members differ in structure");
        }
    }

    rows_.resize(n_states_ * n_actions_ * n_candidates_ * n_states_);
    expected_reward_.resize(n_states_ * n_actions_ * n_candidates_);
    distinct_rows_.resize(n_states_ * n_actions_);
    for (StateIndex s = 0; s < n_states_; ++s) {
        for (ActionIndex a = 0; a < n_actions_; ++a) {
            std::size_t distinct = 0;
            for (std::size_t j = 0; j < n_candidates_; ++j) {
                const TabularMdp& m = set.model(j);
                const auto src = m.transition_row(s, a);
                double* dst = rows_.data() + ((s * n_actions_ + a) * n_candidates_ + j) * n_states_;
                std::copy(src.begin(), src.end(), dst);
                expected_reward_[(s * n_actions_ + a) * n_candidates_ + j] = m.expected_reward(s, a);

                bool seen = false;
                for (std::size_t k = 0; k < j && !seen; ++k) {
                    const TabularMdp& other = set.model(k);
                    seen = std::ranges::equal(other.transition_row(s, a), src) &&
                           std::ranges::equal(other.reward_row(s, a), m.reward_row(s, a));
                }
                if (!seen) ++distinct;
            }
            distinct_rows_[s * n_actions_ + a] = distinct;
        }
    }
}

double RectangularClosure::distinct_kernel_count() const {
    double count = 1.0;
    for (std::size_t d : distinct_rows_) {
        count *= static_cast<double>(d);
    }
    return count;
}

RectangularClosure rectangular_closure(const DiscreteUncertaintySet& set) {
    return RectangularClosure(set);
}

std::vector<Parameter> grid_parameters(const Parameter& lower, const Parameter& upper,
                                       std::size_t points_per_dim) {
    if (points_per_dim < 2) {
        throw UsageError("grid needs at least 2 points per dimension");
    }
    if (lower.empty() || lower.size() != upper.size()) {
        throw UsageError("grid bounds must be non-empty and of equal dimension");
    }
    const std::size_t dim = lower.size();
    std::size_t total = 1;
    for (std::size_t d = 0; d < dim; ++d) total *= points_per_dim;

    auto coordinate = [&](std::size_t d, std::size_t k) {
        if (k + 1 == points_per_dim) return upper[d];
        const double t = static_cast<double>(k) / static_cast<double>(points_per_dim - 1);
        return std::clamp(lower[d] + (upper[d] - lower[d]) * t, lower[d], upper[d]);
    };

    std::vector<Parameter> out;
    out.reserve(total);
    std::vector<std::size_t> idx(dim, 0);
    for (std::size_t n = 0; n < total; ++n) {
        Parameter p(dim);
        for (std::size_t d = 0; d < dim; ++d) p[d] = coordinate(d, idx[d]);
        out.push_back(std::move(p));
        for (std::size_t d = dim; d-- > 0;) {
            if (++idx[d] < points_per_dim) break;
            idx[d] = 0;
        }
    }
    return out;
}

DiscreteUncertaintySet enumerate_grid(const ModelFamily& family, std::size_t points_per_dim) {
    if (!family.is_continuous()) {
        throw UsageError("enumerate_grid requires a continuous family");
    }
    DiscreteUncertaintySet set;
    for (auto& p : grid_parameters(family.lower(), family.upper(), points_per_dim)) {
        TabularMdp m = family.generate(p);
        set.push_back(std::move(p), std::move(m));
    }
    return set;
}

}  // namespace rmdp
