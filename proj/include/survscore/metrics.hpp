#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "survscore/distribution.hpp"
#include "survscore/kaplan_meier.hpp"
#include "survscore/observation.hpp"

namespace survscore {

/// Probabilities are floored here before taking logs in the KL divergence.
inline constexpr double kKlFloor = 1e-12;

/// Default histogram resolution for D-calibration.
inline constexpr std::size_t kDefaultDCalibrationBins = 20;

/// sum_i p_i log(p_i / q_i) after flooring both sides at kKlFloor and
/// renormalizing.
double floored_kl_divergence(std::span<const double> p, std::span<const double> q);

/// Pointwise mean of CDFs sharing one grid (equivalently, mean bin masses).
BinMassCdf average_cdf(std::span<const BinMassCdf> preds);

/// KL divergence between the binned Kaplan-Meier masses and the binned masses
/// of `avg_pred`, on avg_pred's grid.
double km_calibration(const KaplanMeierCurve& km, const BinMassCdf& avg_pred);

struct DCalibration {
    double statistic = 0.0;
    std::vector<double> proportions;
    /// Censored rows with F(c) = 1, whose mass went entirely to the top bin.
    std::size_t flagged = 0;
};

/// Histogram of predicted-CDF values at the observed times. An event adds
/// unit mass to the bin containing F(z); a censored row spreads its unit mass
/// uniformly over [F(c), 1]. Statistic: sum_b (p_b - 1/n_bins)^2.
DCalibration d_calibration(std::span<const BinMassCdf> preds, std::span<const CensoredObservation> obs,
                           std::size_t n_bins = kDefaultDCalibrationBins);

struct MeanScore {
    double mean = 0.0;
    /// Rows whose score was +infinity (the mean is then infinite too).
    std::size_t infinite_rows = 0;
};

MeanScore mean_cen_log_simple(std::span<const BinMassCdf> preds, std::span<const CensoredObservation> obs);

struct CalibrationReport {
    double d_calibration = 0.0;
    double km_calibration = 0.0;
    double mean_cen_log_simple = 0.0;
    std::size_t flagged_count = 0;
};

/// All three evaluation metrics of a set of predictions. The Kaplan-Meier
/// curve is estimated from `obs` itself.
CalibrationReport evaluate_predictions(std::span<const BinMassCdf> preds,
                                       std::span<const CensoredObservation> obs,
                                       std::size_t d_calibration_bins = kDefaultDCalibrationBins);

}  // namespace survscore
