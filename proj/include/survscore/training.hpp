#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "survscore/censoring_weights.hpp"
#include "survscore/grid.hpp"
#include "survscore/model.hpp"
#include "survscore/observation.hpp"
#include "survscore/scoring_rules.hpp"

namespace survscore {

/// Default ratio z_infinity / z_max for Portnoy's pseudo-point.
inline constexpr double kDefaultZInfinityFactor = 1.05;

/// A scoring rule together with the output space the model predicts on.
/// Distribution rules carry a TimeGrid; Portnoy carries a QuantileGrid, the
/// curve's scale z_max and the pseudo-point z_infinity.
class LossSpec {
public:
    static LossSpec distribution(Rule rule, TimeGrid grid);
    static LossSpec quantile(QuantileGrid grid, double z_max, double z_infinity);

    Rule rule() const noexcept { return rule_; }
    std::size_t outputs() const noexcept;
    const TimeGrid& time_grid() const { return time_grid_.value(); }
    const QuantileGrid& quantile_grid() const { return quantile_grid_.value(); }
    double z_max() const noexcept { return z_max_; }
    double z_infinity() const noexcept { return z_infinity_; }

private:
    LossSpec() = default;

    Rule rule_ = Rule::CenLog;
    std::optional<TimeGrid> time_grid_;
    std::optional<QuantileGrid> quantile_grid_;
    double z_max_ = 0.0;
    double z_infinity_ = 0.0;
};

struct IrSettings {
    std::size_t max_outer_iters = 20;
    /// Stop once the largest change of any predicted CDF knot is below this.
    double tol = 1e-4;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t epochs = 300;
    std::uint64_t seed = 0;
    IrSettings ir;
    WeightPolicy policy;
    /// Rows whose score is +infinity (e.g. a censored row in a bin with no
    /// mass beyond it) carry no usable gradient and are left out of the loss.
    bool skip_infinite = true;

    /// Throws std::invalid_argument on a nonpositive learning rate or tolerance.
    void validate() const;
};

struct LossValue {
    double total = 0.0;
    std::size_t infinite_rows = 0;
};

struct FitReport {
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::size_t epochs_run = 0;
    std::size_t outer_iters = 0;
    bool converged = false;
    std::vector<double> max_cdf_change;
    std::size_t flagged_weights = 0;
    std::size_t infinite_rows = 0;
    /// Gradient steps whose step size had to be halved.
    std::size_t backtracks = 0;
    /// Epoch at which the loss stopped being finite, if it did.
    std::optional<std::size_t> diverged_at;

    bool operator==(const FitReport&) const = default;
};

struct WeightEstimate {
    std::vector<WeightVector> weights;
    std::size_t flagged = 0;
};

/// Per-row weights computed from the model's current predictions. Rules that
/// take no weights get empty vectors.
WeightEstimate estimate_weights(const LogitModel& model, const SurvivalDataset& data, const LossSpec& spec,
                                const WeightPolicy& policy = {});

/// Sum of the rule's score over rows. `weights` has one entry per row (it may
/// be empty for rules without weights).
LossValue empirical_loss(const LogitModel& model, const SurvivalDataset& data, const LossSpec& spec,
                         std::span<const WeightVector> weights, bool skip_infinite = false);

/// Gradient of empirical_loss (with skip_infinite) in the model parameters,
/// weights held fixed. Pinball kinks take the left-branch slope -tau.
std::vector<double> loss_gradient(const LogitModel& model, const SurvivalDataset& data, const LossSpec& spec,
                                  std::span<const WeightVector> weights);

/// Full-batch gradient descent for cfg.epochs. Each step starts at
/// cfg.learning_rate and is halved until the loss decreases sufficiently
/// (Armijo); a step that cannot be made ends training early.
FitReport sgd_fit(LogitModel& model, const SurvivalDataset& data, const LossSpec& spec,
                  std::span<const WeightVector> weights, const TrainConfig& cfg);

/// Iterative reweighting: estimate weights from the current model, fit with
/// those weights frozen, repeat until the predicted CDFs stop moving.
FitReport ir_fit(LogitModel& model, const SurvivalDataset& data, const LossSpec& spec, const TrainConfig& cfg);

/// Largest absolute change of a predicted CDF knot between two models, over
/// all rows. Portnoy curves are compared as quantile values over z_max.
double max_cdf_change(const LogitModel& before, const LogitModel& after, const SurvivalDataset& data,
                      const LossSpec& spec);

}  // namespace survscore
