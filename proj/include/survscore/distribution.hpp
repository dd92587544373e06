#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "survscore/grid.hpp"

namespace survscore {

/// Smallest admissible bin mass. Softmax outputs can underflow; masses below
/// this are raised to it before renormalizing.
inline constexpr double kMassFloor = 1e-12;

/// Discretized CDF on a TimeGrid, stored as bin masses f_0..f_{B-1}.
///
/// F is the piecewise-linear function through F(zeta_i) = f_0 + ... + f_{i-1},
/// so the event time is uniform within each bin. Masses are strictly
/// positive and sum to one, which makes F strictly increasing.
class BinMassCdf {
public:
    /// Takes nonnegative, finite masses (one per bin, not all zero), floors
    /// them at kMassFloor and renormalizes. Throws std::invalid_argument
    /// otherwise.
    BinMassCdf(TimeGrid grid, std::vector<double> masses);

    /// Builds the masses from CDF values at the grid thresholds.
    static BinMassCdf from_knot_values(TimeGrid grid, std::span<const double> cdf_at_knots);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t bins() const noexcept { return masses_.size(); }
    std::span<const double> masses() const noexcept { return masses_; }
    double mass(std::size_t bin) const { return masses_[bin]; }

    /// F(zeta_i), exact 0 at i = 0 and exact 1 at i = B.
    double cdf_at_knot(std::size_t i) const { return cdf_[i]; }
    /// 1 - F(zeta_i), accumulated from the right so that small tails keep
    /// their precision. Exact 0 at i = B.
    double survival_at_knot(std::size_t i) const { return survival_[i]; }

    /// Piecewise-linear F(t) for t in [0, zeta_B]; std::domain_error otherwise.
    double cdf_at(double t) const;
    /// 1 - F(t), computed without cancellation.
    double survival_at(double t) const;
    /// Inverse of cdf_at for tau in [0, 1]; std::domain_error otherwise.
    double quantile_at(double tau) const;
    /// f_i / (zeta_{i+1} - zeta_i) for the bin containing t.
    double density_at(double t) const;

private:
    TimeGrid grid_;
    std::vector<double> masses_;
    std::vector<double> cdf_;
    std::vector<double> survival_;
};

/// Quantile curve F^{-1}(tau_0..tau_B) on a QuantileGrid. The first value is
/// 0 and the last is the upper end of the time axis (z_max); values are
/// strictly increasing, so the implied CDF is piecewise linear.
class QuantileCurve {
public:
    QuantileCurve(QuantileGrid grid, std::vector<double> values);

    const QuantileGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double upper() const noexcept { return values_.back(); }

    /// F^{-1}(tau); tau must be one of the grid levels.
    double value_at(double tau) const;
    /// The piecewise-linear CDF implied by the curve, t in [0, upper()].
    double cdf_at(double t) const;

    /// Masses of the implied CDF on a time grid. Times beyond upper() have
    /// CDF 1. Used to score quantile predictions with the distribution metrics.
    BinMassCdf to_bin_masses(const TimeGrid& grid) const;

private:
    QuantileGrid grid_;
    std::vector<double> values_;
};

/// Total variation distance: half the L1 distance between mass vectors.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace survscore
