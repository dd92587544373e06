#include "survscore/censoring_weights.hpp"

#include <algorithm>
#include <stdexcept>

namespace survscore {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

CdfRef::CdfRef(const BinMassCdf& cdf) : bins_(&cdf) {}
CdfRef::CdfRef(const QuantileCurve& curve) : curve_(&curve) {}
CdfRef::CdfRef(std::function<double(double)> cdf) : fn_(std::move(cdf)) {
    if (!fn_) throw std::invalid_argument("CdfRef: empty function");
}

double CdfRef::cdf(double t) const {
    if (t <= 0.0) return 0.0;
    if (bins_) return t >= bins_->grid().upper() ? 1.0 : bins_->cdf_at(t);
    if (curve_) return t >= curve_->upper() ? 1.0 : curve_->cdf_at(t);
    return clamp01(fn_(t));
}

double CdfRef::survival(double t) const {
    if (t <= 0.0) return 1.0;
    if (bins_) return t >= bins_->grid().upper() ? 0.0 : bins_->survival_at(t);
    return 1.0 - cdf(t);
}

ScalarWeight portnoy_weight(const CdfRef& ref, double c, double tau, const WeightPolicy& policy) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw std::domain_error("portnoy_weight: level outside [0, 1]");
    }
    if (!(c > 0.0)) {
        throw std::domain_error("portnoy_weight: censoring time must be positive");
    }
    const double tau_c = ref.cdf(c);
    if (tau_c > tau) {
        return {policy.fallback_w, false};
    }
    const double surv_c = ref.survival(c);
    if (surv_c <= 0.0) {
        return {1.0, true};
    }
    return {clamp01((tau - tau_c) / surv_c), false};
}

WeightResult portnoy_level_weights(const CdfRef& ref, const CensoredObservation& obs,
                                   const QuantileGrid& levels, const WeightPolicy& policy) {
    std::vector<double> w(levels.bins(), 1.0);
    bool degenerate = false;
    if (obs.censored()) {
        w[0] = 0.0;
        for (std::size_t j = 1; j < levels.bins(); ++j) {
            const auto sw = portnoy_weight(ref, obs.z, levels[j], policy);
            w[j] = sw.w;
            degenerate = degenerate || sw.degenerate;
        }
    }
    return {WeightVector(std::move(w)), degenerate};
}

WeightResult cen_log_weights(const CdfRef& ref, const CensoredObservation& obs, const TimeGrid& grid) {
    std::vector<double> w(grid.bins(), 0.0);
    if (obs.event) return {WeightVector(std::move(w)), false};
    const std::size_t i = grid.bin_of(obs.z);
    const double surv_c = ref.survival(obs.z);
    if (surv_c <= 0.0) {
        w[i] = 1.0;
        return {WeightVector(std::move(w)), true};
    }
    const double surv_next = (i + 1 == grid.bins()) ? 0.0 : ref.survival(grid[i + 1]);
    w[i] = clamp01((surv_c - surv_next) / surv_c);
    return {WeightVector(std::move(w)), false};
}

WeightResult cen_brier_weights(const CdfRef& ref, const CensoredObservation& obs, const TimeGrid& grid) {
    const std::size_t b = grid.bins();
    std::vector<double> w(b, 0.0);
    const std::size_t j = grid.bin_of(obs.z);
    if (obs.event) {
        w[j] = 1.0;
        return {WeightVector(std::move(w)), false};
    }
    const double surv_c = ref.survival(obs.z);
    if (surv_c <= 0.0) {
        w[b - 1] = 1.0;
        return {WeightVector(std::move(w)), true};
    }
    auto surv_knot = [&](std::size_t k) { return k >= b ? 0.0 : ref.survival(grid[k]); };
    w[j] = clamp01((surv_c - surv_knot(j + 1)) / surv_c);
    for (std::size_t i = j + 1; i < b; ++i) {
        w[i] = clamp01((surv_knot(i) - surv_knot(i + 1)) / surv_c);
    }
    return {WeightVector(std::move(w)), false};
}

WeightResult cen_rps_weights(const CdfRef& ref, const CensoredObservation& obs, const TimeGrid& grid) {
    const std::size_t b = grid.bins();
    std::vector<double> w(b, 0.0);
    if (obs.event) return {WeightVector(std::move(w)), false};
    const double surv_c = ref.survival(obs.z);
    const bool degenerate = surv_c <= 0.0;
    for (std::size_t i = 1; i < b; ++i) {
        if (obs.z > grid[i]) continue;
        w[i] = degenerate ? 1.0 : clamp01((surv_c - ref.survival(grid[i])) / surv_c);
    }
    return {WeightVector(std::move(w)), degenerate};
}

WeightResult distribution_rule_weights(Rule rule, const CdfRef& ref, const CensoredObservation& obs,
                                       const TimeGrid& grid) {
    switch (rule) {
        case Rule::CenLog: return cen_log_weights(ref, obs, grid);
        case Rule::CenBrier: return cen_brier_weights(ref, obs, grid);
        case Rule::CenRps: return cen_rps_weights(ref, obs, grid);
        case Rule::Portnoy:
            throw std::invalid_argument("portnoy weights are per quantile level; use portnoy_level_weights");
        default: return {};
    }
}

}  // namespace survscore
