#include "survscore/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace survscore {

BinMassCdf::BinMassCdf(TimeGrid grid, std::vector<double> masses)
    : grid_(std::move(grid)), masses_(std::move(masses)) {
    if (masses_.size() != grid_.bins()) {
        throw std::invalid_argument("BinMassCdf: expected " + std::to_string(grid_.bins()) +
                                    " masses, got " + std::to_string(masses_.size()));
    }
    double raw_total = 0.0;
    for (double m : masses_) {
        if (!std::isfinite(m) || m < 0.0) {
            throw std::invalid_argument("BinMassCdf: masses must be finite and nonnegative");
        }
        raw_total += m;
    }
    if (!(raw_total > 0.0)) {
        throw std::invalid_argument("BinMassCdf: masses must not all be zero");
    }
    double total = 0.0;
    for (double& m : masses_) {
        m = std::max(m / raw_total, kMassFloor);
        total += m;
    }
    for (double& m : masses_) {
        m /= total;
    }

    const std::size_t b = masses_.size();
    cdf_.assign(b + 1, 0.0);
    survival_.assign(b + 1, 0.0);
    for (std::size_t i = 0; i < b; ++i) {
        cdf_[i + 1] = cdf_[i] + masses_[i];
    }
    for (std::size_t i = b; i-- > 0;) {
        survival_[i] = survival_[i + 1] + masses_[i];
    }
    cdf_[b] = 1.0;
    survival_[0] = 1.0;
}

BinMassCdf BinMassCdf::from_knot_values(TimeGrid grid, std::span<const double> cdf_at_knots) {
    if (cdf_at_knots.size() != grid.bins() + 1) {
        throw std::invalid_argument("BinMassCdf::from_knot_values: size mismatch");
    }
    std::vector<double> masses(grid.bins());
    for (std::size_t i = 0; i < masses.size(); ++i) {
        masses[i] = std::max(cdf_at_knots[i + 1] - cdf_at_knots[i], 0.0);
    }
    return BinMassCdf(std::move(grid), std::move(masses));
}

double BinMassCdf::cdf_at(double t) const {
    const std::size_t i = grid_.bin_of(t);
    if (t == grid_[i + 1]) return cdf_[i + 1];
    if (t <= grid_[i]) return cdf_[i];
    const double frac = (t - grid_[i]) / grid_.width(i);
    return cdf_[i] + masses_[i] * frac;
}

double BinMassCdf::survival_at(double t) const {
    const std::size_t i = grid_.bin_of(t);
    if (t == grid_[i + 1]) return survival_[i + 1];
    if (t <= grid_[i]) return survival_[i];
    const double frac = (t - grid_[i]) / grid_.width(i);
    return survival_[i + 1] + masses_[i] * (1.0 - frac);
}

double BinMassCdf::quantile_at(double tau) const {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw std::domain_error("BinMassCdf::quantile_at: level outside [0, 1]");
    }
    if (tau == 0.0) return 0.0;
    if (tau == 1.0) return grid_.upper();
    // Bin i with F(zeta_i) < tau <= F(zeta_{i+1}).
    auto it = std::lower_bound(cdf_.begin() + 1, cdf_.end(), tau);
    const auto i = static_cast<std::size_t>(it - cdf_.begin()) - 1;
    const double frac = std::clamp((tau - cdf_[i]) / masses_[i], 0.0, 1.0);
    return grid_[i] + frac * grid_.width(i);
}

double BinMassCdf::density_at(double t) const {
    const std::size_t i = grid_.bin_of(t);
    return masses_[i] / grid_.width(i);
}

QuantileCurve::QuantileCurve(QuantileGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.levels().size()) {
        throw std::invalid_argument("QuantileCurve: one value per level required");
    }
    if (values_.front() != 0.0) {
        throw std::invalid_argument("QuantileCurve: F^{-1}(0) must be 0");
    }
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || !(values_[i] > values_[i - 1])) {
            throw std::invalid_argument("QuantileCurve: values must be finite and strictly increasing");
        }
    }
}

double QuantileCurve::value_at(double tau) const {
    return values_[grid_.index_of(tau)];
}

double QuantileCurve::cdf_at(double t) const {
    if (!(t >= 0.0 && t <= upper())) {
        throw std::domain_error("QuantileCurve::cdf_at: time outside [0, upper]");
    }
    if (t == 0.0) return 0.0;
    auto it = std::lower_bound(values_.begin() + 1, values_.end(), t);
    const auto j = static_cast<std::size_t>(it - values_.begin()) - 1;
    if (t == values_[j + 1]) return grid_[j + 1];
    const double frac = (t - values_[j]) / (values_[j + 1] - values_[j]);
    return grid_[j] + frac * (grid_[j + 1] - grid_[j]);
}

BinMassCdf QuantileCurve::to_bin_masses(const TimeGrid& grid) const {
    std::vector<double> knots(grid.bins() + 1);
    for (std::size_t i = 0; i < knots.size(); ++i) {
        knots[i] = grid[i] >= upper() ? 1.0 : cdf_at(grid[i]);
    }
    return BinMassCdf::from_knot_values(grid, knots);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("total_variation: size mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        sum += std::abs(p[i] - q[i]);
    }
    return 0.5 * sum;
}

}  // namespace survscore
