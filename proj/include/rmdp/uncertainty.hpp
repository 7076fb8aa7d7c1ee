#pragma once

// Uncertainty sets: parameterized model families, discrete model lists and
// the sa-rectangular closure of a discrete list.

#include "rmdp/mdp.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rmdp {

using Parameter = std::vector<double>;

/// Pure map from a parameter vector to an MDP. Must be safe to call
/// concurrently and return bit-identical models for equal parameters.
using MdpGenerator = std::function<TabularMdp(std::span<const double>)>;

class ModelFamily {
public:
    enum class Kind { discrete, continuous };

    /// Family over an explicit, ordered list of parameter vectors.
    static ModelFamily discrete(std::string name, std::vector<Parameter> parameters,
                                MdpGenerator generator);

    /// Family over the box [lower, upper] (inclusive, per dimension).
    static ModelFamily continuous(std::string name, Parameter lower, Parameter upper,
                                  MdpGenerator generator);

    Kind kind() const noexcept { return kind_; }
    bool is_continuous() const noexcept { return kind_ == Kind::continuous; }
    const std::string& name() const noexcept { return name_; }
    std::size_t dimension() const noexcept { return dimension_; }

    /// Discrete families only.
    const std::vector<Parameter>& parameters() const;
    /// Continuous families only.
    const Parameter& lower() const;
    const Parameter& upper() const;

    /// Continuous: inside the box. Discrete: equal to one of the listed vectors.
    bool contains(std::span<const double> parameter) const;

    /// Default first model: box midpoint, or the first listed parameter.
    Parameter default_start() const;

    /// Generates the model for `parameter`; throws UsageError outside the domain.
    TabularMdp generate(std::span<const double> parameter) const;

private:
    ModelFamily() = default;

    Kind kind_ = Kind::discrete;
    std::string name_;
    std::size_t dimension_ = 0;
    std::vector<Parameter> parameters_;
    Parameter lower_;
    Parameter upper_;
    MdpGenerator generator_;
};

/// Ordered, non-empty list of structurally compatible models together with
/// the parameter that produced each one. Index order is insertion order.
class DiscreteUncertaintySet {
public:
    DiscreteUncertaintySet() = default;
    DiscreteUncertaintySet(std::vector<Parameter> parameters, std::vector<TabularMdp> models);

    /// Materializes every member of a discrete family.
    static DiscreteUncertaintySet from_family(const ModelFamily& family);

    void push_back(Parameter parameter, TabularMdp model);

    std::size_t size() const noexcept { return models_.size(); }
    bool empty() const noexcept { return models_.empty(); }
    const TabularMdp& model(std::size_t i) const { return *models_.at(i); }
    const Parameter& parameter(std::size_t i) const { return parameters_.at(i); }
    const std::vector<Parameter>& parameters() const noexcept { return parameters_; }
    const std::vector<std::shared_ptr<const TabularMdp>>& shared_models() const noexcept {
        return models_;
    }

private:
    std::vector<Parameter> parameters_;
    std::vector<std::shared_ptr<const TabularMdp>> models_;
};

/**
 * The sa-rectangular product of the per-(s,a) rows of a discrete set. The
 * product itself is never built: candidate rows for each (s,a) are packed
 * contiguously, (s, a, j, s') order, so the robust backup can take the
 * minimum over j row by row.
 */
class RectangularClosure {
public:
    explicit RectangularClosure(const DiscreteUncertaintySet& set);

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }
    std::size_t n_candidates() const noexcept { return n_candidates_; }
    double discount() const noexcept { return discount_; }
    StateIndex start_state() const noexcept { return start_state_; }

    std::span<const double> candidate_row(StateIndex s, ActionIndex a, std::size_t j) const {
        return {rows_.data() + ((s * n_actions_ + a) * n_candidates_ + j) * n_states_, n_states_};
    }
    double candidate_expected_reward(StateIndex s, ActionIndex a, std::size_t j) const {
        return expected_reward_[(s * n_actions_ + a) * n_candidates_ + j];
    }

    /// Number of distinct (T(s,a,.), r(s,a,.)) rows offered at (s,a).
    std::size_t distinct_rows(StateIndex s, ActionIndex a) const {
        return distinct_rows_[s * n_actions_ + a];
    }

    /// Cardinality of the product set of distinct kernels (product of
    /// distinct_rows); returned as a double because it overflows quickly.
    double distinct_kernel_count() const;

private:
    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::size_t n_candidates_ = 0;
    double discount_ = 0.0;
    StateIndex start_state_ = 0;
    std::vector<double> rows_;
    std::vector<double> expected_reward_;
    std::vector<std::size_t> distinct_rows_;
};

RectangularClosure rectangular_closure(const DiscreteUncertaintySet& set);

/// Uniform inclusive grid over a continuous family's box, row-major (last
/// dimension fastest). Throws UsageError for discrete families or
/// points_per_dim < 2.
DiscreteUncertaintySet enumerate_grid(const ModelFamily& family, std::size_t points_per_dim);

/// The parameter vectors enumerate_grid would visit, without generating models.
std::vector<Parameter> grid_parameters(const Parameter& lower, const Parameter& upper,
                                       std::size_t points_per_dim);

}  // namespace rmdp
