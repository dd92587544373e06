#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace survscore {

/// Default right padding of the time axis, so that the largest observation
/// falls strictly inside the last bin.
inline constexpr double kDefaultGridEpsilon = 1e-3;

/// Time thresholds 0 = zeta_0 < zeta_1 < ... < zeta_B.
///
/// Bin i is the right-closed interval (zeta_i, zeta_{i+1}].
class TimeGrid {
public:
    /// Throws std::invalid_argument unless the thresholds start at 0, are
    /// strictly increasing and finite, and describe at least one bin.
    explicit TimeGrid(std::vector<double> thresholds);

    std::size_t bins() const noexcept { return thresholds_.size() - 1; }
    std::span<const double> thresholds() const noexcept { return thresholds_; }
    double operator[](std::size_t i) const { return thresholds_[i]; }
    double upper() const noexcept { return thresholds_.back(); }
    double width(std::size_t bin) const { return thresholds_[bin + 1] - thresholds_[bin]; }

    /// Index of the bin (zeta_i, zeta_{i+1}] containing t. t = 0 maps to
    /// bin 0. Throws std::domain_error for t outside [0, upper()].
    std::size_t bin_of(double t) const;

    bool operator==(const TimeGrid&) const = default;

private:
    std::vector<double> thresholds_;
};

/// Quantile levels 0 = tau_0 < tau_1 < ... < tau_B = 1.
class QuantileGrid {
public:
    explicit QuantileGrid(std::vector<double> levels);

    std::size_t bins() const noexcept { return levels_.size() - 1; }
    std::span<const double> levels() const noexcept { return levels_; }
    double operator[](std::size_t i) const { return levels_[i]; }

    /// Position of tau in the grid; throws std::domain_error when tau is not
    /// one of the levels (levels are never interpolated).
    std::size_t index_of(double tau) const;

    bool operator==(const QuantileGrid&) const = default;

private:
    std::vector<double> levels_;
};

/// B equal-length bins covering [0, z_max + eps).
TimeGrid uniform_time_grid(double z_max, std::size_t bins, double eps = kDefaultGridEpsilon);

/// B equal-length steps covering [0, 1].
QuantileGrid uniform_quantile_grid(std::size_t bins);

}  // namespace survscore
