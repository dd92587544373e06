#pragma once

#include <functional>

#include "survscore/distribution.hpp"
#include "survscore/grid.hpp"
#include "survscore/observation.hpp"
#include "survscore/scoring_rules.hpp"

namespace survscore {

/// Non-owning view of a reference CDF, used to evaluate F(c) and F(zeta_i).
/// Arguments at or beyond the distribution's upper end evaluate to 1.
class CdfRef {
public:
    CdfRef(const BinMassCdf& cdf);     // NOLINT(google-explicit-constructor)
    CdfRef(const QuantileCurve& curve);  // NOLINT(google-explicit-constructor)
    /// Any monotone callable with F(0) = 0; the survival is taken as 1 - F.
    explicit CdfRef(std::function<double(double)> cdf);

    double cdf(double t) const;
    double survival(double t) const;

private:
    const BinMassCdf* bins_ = nullptr;
    const QuantileCurve* curve_ = nullptr;
    std::function<double(double)> fn_;
};

struct WeightPolicy {
    /// Portnoy weight used when F(c) > tau, where any constant in [0, 1] is
    /// admissible.
    double fallback_w = 1.0;
};

struct ScalarWeight {
    double w = 0.0;
    /// F(c) = 1: the conditional probability is undefined.
    bool degenerate = false;
};

struct WeightResult {
    WeightVector weights;
    bool degenerate = false;
};

/// w = (tau - F(c)) / (1 - F(c)) when F(c) <= tau, else policy.fallback_w.
ScalarWeight portnoy_weight(const CdfRef& ref, double c, double tau, const WeightPolicy& policy = {});

/// Portnoy weights for every level of `levels` (entry 0 unused). Uncensored
/// observations get all ones, which leaves their score unchanged.
WeightResult portnoy_level_weights(const CdfRef& ref, const CensoredObservation& obs,
                                   const QuantileGrid& levels, const WeightPolicy& policy = {});

/// Cen-log: w_i = (F(zeta_{i+1}) - F(c)) / (1 - F(c)) for the bin i holding c,
/// zero elsewhere (only that entry is read).
WeightResult cen_log_weights(const CdfRef& ref, const CensoredObservation& obs, const TimeGrid& grid);

/// Cen-Brier: indicator of z's bin when uncensored. When censored in bin j:
/// 0 before j, (F(zeta_{j+1}) - F(c)) / (1 - F(c)) at j, and the conditional
/// bin masses f_i / (1 - F(c)) after j. Censored weights sum to one; the grid
/// end is treated as F(zeta_B) = 1.
WeightResult cen_brier_weights(const CdfRef& ref, const CensoredObservation& obs, const TimeGrid& grid);

/// Cen-RPS: entry i (threshold zeta_i, i >= 1) is (F(zeta_i) - F(c)) / (1 - F(c))
/// when censored with c <= zeta_i, zero otherwise.
WeightResult cen_rps_weights(const CdfRef& ref, const CensoredObservation& obs, const TimeGrid& grid);

/// Weights for any distribution rule; rules without weights get an empty
/// vector.
WeightResult distribution_rule_weights(Rule rule, const CdfRef& ref, const CensoredObservation& obs,
                                       const TimeGrid& grid);

}  // namespace survscore
