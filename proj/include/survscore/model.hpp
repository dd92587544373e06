#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "survscore/distribution.hpp"
#include "survscore/grid.hpp"
#include "survscore/observation.hpp"

namespace survscore {

/// out = softmax(logits), computed with the max shifted out.
void softmax(std::span<const double> logits, std::span<double> out);

/// Chain rule through softmax: given p = softmax(a) and g = dL/dp, writes
/// dL/da_k = p_k (g_k - sum_j p_j g_j).
void softmax_backward(std::span<const double> p, std::span<const double> grad_p, std::span<double> grad_logits);

/// Logit model producing B outputs per row, turned into bin masses (or
/// quantile increments) by a softmax.
///
/// Group table: one free logit vector per group label.
/// Linear: logits = b + W ((x - mean) / scale) on the row's numeric features.
class LogitModel {
public:
    enum class Kind { GroupTable, Linear };

    /// All logits start at zero, i.e. the uniform distribution.
    static LogitModel group_table(std::vector<std::string> groups, std::size_t outputs);
    /// Zero-initialized linear model. `mean`/`scale` standardize the inputs
    /// (empty means identity).
    static LogitModel linear(std::size_t n_features, std::size_t outputs, std::vector<double> mean = {},
                             std::vector<double> scale = {});
    /// Linear model whose standardization is fitted to `data`'s features.
    static LogitModel linear_for(const SurvivalDataset& data, std::size_t outputs);

    Kind kind() const noexcept { return kind_; }
    std::size_t outputs() const noexcept { return outputs_; }
    std::size_t n_features() const noexcept { return n_features_; }
    const std::vector<std::string>& groups() const noexcept { return groups_; }

    std::span<double> parameters() noexcept { return params_; }
    std::span<const double> parameters() const noexcept { return params_; }

    /// Index of a group label; std::out_of_range for unknown labels.
    std::size_t group_index(const std::string& group) const;

    void logits(const SurvivalRow& row, std::span<double> out) const;
    /// Adds dL/dparams for one row given dL/dlogits.
    void accumulate_gradient(const SurvivalRow& row, std::span<const double> grad_logits,
                             std::span<double> grad_params) const;

    /// Softmax of the logits as bin masses on `grid`.
    BinMassCdf predict_distribution(const SurvivalRow& row, const TimeGrid& grid) const;
    /// Cumulative softmax increments scaled to [0, z_max].
    QuantileCurve predict_quantiles(const SurvivalRow& row, const QuantileGrid& grid, double z_max) const;

private:
    LogitModel() = default;

    Kind kind_ = Kind::GroupTable;
    std::size_t outputs_ = 0;
    std::size_t n_features_ = 0;
    std::vector<std::string> groups_;
    std::unordered_map<std::string, std::size_t> group_lookup_;
    std::vector<double> mean_;
    std::vector<double> scale_;
    std::vector<double> params_;
};

/// Masses from logits with the same floor-and-renormalize treatment as
/// BinMassCdf; shared by distribution and quantile predictions.
std::vector<double> softmax_masses(std::span<const double> logits);

/// Curve values z_max * (cumulative sum of increments), pinned to exactly 0
/// and z_max at the ends.
QuantileCurve quantile_curve_from_increments(const QuantileGrid& grid, std::span<const double> increments,
                                             double z_max);

}  // namespace survscore
