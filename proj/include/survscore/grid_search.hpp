#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "survscore/censoring_weights.hpp"
#include "survscore/distribution.hpp"
#include "survscore/grid.hpp"
#include "survscore/observation.hpp"

namespace survscore {

struct GridSearchConfig {
    /// z_infinity = factor * z_max.
    double z_infinity_factor = 1.05;
    std::size_t ternary_iters = 100;
};

struct GridSearchFit {
    std::vector<std::string> groups;
    std::vector<QuantileCurve> curves;
    /// Levels whose raw estimate had to move to make a curve strictly
    /// increasing, summed over groups.
    std::size_t repairs = 0;
};

/// Minimizer over [lo, hi] of sum_r w_r rho_tau(q, z_r) + (1 - w_r) rho_tau(q, z_inf)
/// by ternary search (the objective is convex and piecewise linear in q).
double weighted_portnoy_minimizer(const std::vector<double>& z, const std::vector<double>& w, double z_infinity,
                                  double tau, double lo, double hi, std::size_t iters = 100);

/// Sequential per-group quantile fit in increasing level order. For a
/// censored row the already fitted curve locates tau'_c, the smallest level
/// with quantile >= c, giving w = (tau_j - tau'_c) / (1 - tau'_c); without
/// such a level the policy's fallback weight is used.
///
/// `groups` selects and orders the groups (empty means all, in first-seen
/// order); a listed group with no rows is an error.
GridSearchFit grid_search_fit_quantiles(const SurvivalDataset& data, const QuantileGrid& grid,
                                        const WeightPolicy& policy = {}, const GridSearchConfig& cfg = {},
                                        std::vector<std::string> groups = {});

/// Pool-adjacent-violators fit of a nondecreasing sequence, then nudges so
/// that 0 < v_1 < ... < v_{n-1} < upper with v_0 = 0 and v_n = upper.
/// Returns how many interior entries changed.
std::size_t repair_monotone(std::vector<double>& values, double upper);

}  // namespace survscore
