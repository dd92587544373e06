#include "survscore/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace survscore {

namespace {

void require_strictly_increasing(const std::vector<double>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw std::invalid_argument(std::string(what) + ": non-finite value");
        }
        if (i > 0 && !(v[i] > v[i - 1])) {
            throw std::invalid_argument(std::string(what) + ": values must be strictly increasing");
        }
    }
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> thresholds) : thresholds_(std::move(thresholds)) {
    if (thresholds_.size() < 2) {
        throw std::invalid_argument("TimeGrid: need at least one bin");
    }
    if (thresholds_.front() != 0.0) {
        throw std::invalid_argument("TimeGrid: first threshold must be 0");
    }
    require_strictly_increasing(thresholds_, "TimeGrid");
}

std::size_t TimeGrid::bin_of(double t) const {
    if (!(t >= 0.0 && t <= upper())) {
        throw std::domain_error("TimeGrid::bin_of: time " + std::to_string(t) + " outside [0, " +
                                std::to_string(upper()) + "]");
    }
    // First threshold >= t is zeta_{i+1} for the bin (zeta_i, zeta_{i+1}].
    auto it = std::lower_bound(thresholds_.begin() + 1, thresholds_.end(), t);
    return static_cast<std::size_t>(it - thresholds_.begin()) - 1;
}

QuantileGrid::QuantileGrid(std::vector<double> levels) : levels_(std::move(levels)) {
    if (levels_.size() < 2) {
        throw std::invalid_argument("QuantileGrid: need at least one step");
    }
    if (levels_.front() != 0.0 || levels_.back() != 1.0) {
        throw std::invalid_argument("QuantileGrid: levels must start at 0 and end at 1");
    }
    require_strictly_increasing(levels_, "QuantileGrid");
}

std::size_t QuantileGrid::index_of(double tau) const {
    constexpr double kMatch = 1e-12;
    auto it = std::lower_bound(levels_.begin(), levels_.end(), tau - kMatch);
    if (it == levels_.end() || std::abs(*it - tau) > kMatch) {
        throw std::domain_error("QuantileGrid::index_of: level " + std::to_string(tau) +
                                " is not on the grid");
    }
    return static_cast<std::size_t>(it - levels_.begin());
}

TimeGrid uniform_time_grid(double z_max, std::size_t bins, double eps) {
    if (!(z_max > 0.0) || bins < 1 || eps < 0.0 || !std::isfinite(z_max) || !std::isfinite(eps)) {
        throw std::domain_error("uniform_time_grid: require z_max > 0, bins >= 1, eps >= 0");
    }
    const double upper = z_max + eps;
    std::vector<double> t(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        t[i] = upper * static_cast<double>(i) / static_cast<double>(bins);
    }
    t.back() = upper;
    return TimeGrid(std::move(t));
}

QuantileGrid uniform_quantile_grid(std::size_t bins) {
    if (bins < 1) {
        throw std::domain_error("uniform_quantile_grid: bins must be >= 1");
    }
    std::vector<double> levels(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        levels[i] = static_cast<double>(i) / static_cast<double>(bins);
    }
    return QuantileGrid(std::move(levels));
}

}  // namespace survscore
