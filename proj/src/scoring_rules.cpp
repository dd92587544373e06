#include "survscore/scoring_rules.hpp"

#include <cmath>
#include <stdexcept>

namespace survscore {

namespace {

struct RuleEntry {
    Rule rule;
    std::string_view name;
};

constexpr RuleEntry kRuleNames[] = {
    {Rule::Portnoy, "portnoy"},          {Rule::Log, "log"},
    {Rule::CenLog, "cen-log"},           {Rule::CenLogSimple, "cen-log-simple"},
    {Rule::CenContLog, "cen-cont-log"},  {Rule::Brier, "brier"},
    {Rule::CenBrier, "cen-brier"},       {Rule::Rps, "rps"},
    {Rule::CenRps, "cen-rps"},
};

void require_level(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw std::domain_error("quantile level outside [0, 1]");
    }
}

void require_in_support(const BinMassCdf& pred, double y) {
    if (!(y > 0.0 && y <= pred.grid().upper())) {
        throw std::domain_error("observation outside (0, zeta_B]");
    }
}

void require_weights(const WeightVector& weights, std::size_t bins) {
    if (weights.size() != bins) {
        throw std::invalid_argument("weight vector length " + std::to_string(weights.size()) +
                                    " does not match " + std::to_string(bins) + " bins");
    }
}

// -(w log a + (1 - w) log b) with 0 log 0 = 0.
double mixed_neg_log(double w, double a, double b) {
    double s = 0.0;
    if (w > 0.0) {
        if (a <= 0.0) return kInfiniteScore;
        s -= w * std::log(a);
    }
    if (w < 1.0) {
        if (b <= 0.0) return kInfiniteScore;
        s -= (1.0 - w) * std::log(b);
    }
    return s;
}

}  // namespace

std::string_view rule_name(Rule rule) {
    for (const auto& e : kRuleNames) {
        if (e.rule == rule) return e.name;
    }
    return "unknown";
}

Rule parse_rule(std::string_view name) {
    for (const auto& e : kRuleNames) {
        if (e.name == name) return e.rule;
    }
    throw std::invalid_argument("unknown scoring rule '" + std::string(name) + "'");
}

WeightVector::WeightVector(std::vector<double> weights) : w_(std::move(weights)) {
    for (double w : w_) {
        if (!(w >= 0.0 && w <= 1.0)) {
            throw std::invalid_argument("weights must lie in [0, 1]");
        }
    }
}

double WeightVector::sum() const {
    double s = 0.0;
    for (double w : w_) s += w;
    return s;
}

double pinball(double predicted_quantile, double y, double tau) {
    require_level(tau);
    if (predicted_quantile >= y) {
        return (1.0 - tau) * (predicted_quantile - y);
    }
    return tau * (y - predicted_quantile);
}

double portnoy(const QuantileCurve& pred, const CensoredObservation& obs, const PortnoyConfig& cfg) {
    require_level(cfg.tau);
    if (!(cfg.w >= 0.0 && cfg.w <= 1.0)) {
        throw std::invalid_argument("portnoy: weight outside [0, 1]");
    }
    if (!(cfg.z_infinity > pred.upper())) {
        throw std::invalid_argument("portnoy: z_infinity must exceed z_max");
    }
    const double q = pred.value_at(cfg.tau);
    if (obs.event) {
        return pinball(q, obs.z, cfg.tau);
    }
    return cfg.w * pinball(q, obs.z, cfg.tau) + (1.0 - cfg.w) * pinball(q, cfg.z_infinity, cfg.tau);
}

double portnoy_curve(const QuantileCurve& pred, const CensoredObservation& obs,
                     const WeightVector& level_weights, double z_infinity) {
    const auto levels = pred.grid().levels();
    const std::size_t bins = levels.size() - 1;
    if (!obs.event) require_weights(level_weights, bins);
    double total = 0.0;
    for (std::size_t j = 1; j < bins; ++j) {
        const double w = obs.event ? 1.0 : level_weights[j];
        total += portnoy(pred, obs, PortnoyConfig{levels[j], z_infinity, w});
    }
    return total;
}

double log_score(const BinMassCdf& pred, double y) {
    require_in_support(pred, y);
    return -std::log(pred.mass(pred.grid().bin_of(y)));
}

double cen_log(const BinMassCdf& pred, const CensoredObservation& obs, const WeightVector& weights) {
    require_in_support(pred, obs.z);
    const std::size_t i = pred.grid().bin_of(obs.z);
    if (obs.event) {
        return -std::log(pred.mass(i));
    }
    require_weights(weights, pred.bins());
    return mixed_neg_log(weights[i], pred.mass(i), pred.survival_at_knot(i + 1));
}

double cen_log_simple(const BinMassCdf& pred, const CensoredObservation& obs) {
    return cen_log(pred, obs, WeightVector::zeros(pred.bins()));
}

double cen_cont_log(const BinMassCdf& pred, const CensoredObservation& obs) {
    require_in_support(pred, obs.z);
    if (obs.event) {
        return -std::log(pred.density_at(obs.z));
    }
    const double s = pred.survival_at(obs.z);
    return s > 0.0 ? -std::log(s) : kInfiniteScore;
}

double brier(const BinMassCdf& pred, double y) {
    require_in_support(pred, y);
    const std::size_t bin = pred.grid().bin_of(y);
    double total = 0.0;
    for (std::size_t i = 0; i < pred.bins(); ++i) {
        const double d = (i == bin ? 1.0 : 0.0) - pred.mass(i);
        total += d * d;
    }
    return total;
}

double cen_brier(const BinMassCdf& pred, const CensoredObservation& obs, const WeightVector& weights) {
    require_in_support(pred, obs.z);
    require_weights(weights, pred.bins());
    double total = 0.0;
    for (std::size_t i = 0; i < pred.bins(); ++i) {
        const double f = pred.mass(i);
        const double w = weights[i];
        total += w * ((1.0 - f) * (1.0 - f)) + (1.0 - w) * (f * f);
    }
    return total;
}

double cen_binary_brier(const BinMassCdf& pred, const CensoredObservation& obs, double zeta, double w) {
    if (!(zeta > 0.0 && zeta < pred.grid().upper())) {
        throw std::domain_error("cen_binary_brier: threshold outside (0, zeta_B)");
    }
    if (!(w >= 0.0 && w <= 1.0)) {
        throw std::invalid_argument("cen_binary_brier: weight outside [0, 1]");
    }
    const double f = pred.cdf_at(zeta);
    if (obs.z > zeta) {
        return (0.0 - f) * (0.0 - f);
    }
    if (obs.event) {
        return (1.0 - f) * (1.0 - f);
    }
    return w * ((1.0 - f) * (1.0 - f)) + (1.0 - w) * (f * f);
}

double rps(const BinMassCdf& pred, double y) {
    require_in_support(pred, y);
    const auto& grid = pred.grid();
    double total = 0.0;
    for (std::size_t i = 1; i < grid.bins(); ++i) {
        const double d = (y <= grid[i] ? 1.0 : 0.0) - pred.cdf_at_knot(i);
        total += d * d;
    }
    return total;
}

double cen_rps(const BinMassCdf& pred, const CensoredObservation& obs, const WeightVector& weights) {
    require_in_support(pred, obs.z);
    if (!obs.event) require_weights(weights, pred.bins());
    const auto& grid = pred.grid();
    double total = 0.0;
    for (std::size_t i = 1; i < grid.bins(); ++i) {
        total += cen_binary_brier(pred, obs, grid[i], obs.event ? 0.0 : weights[i]);
    }
    return total;
}

double score(Rule rule, const BinMassCdf& pred, const CensoredObservation& obs,
             const WeightVector& weights) {
    if (!accepts_censoring(rule) && !obs.event) {
        throw std::invalid_argument(std::string(rule_name(rule)) + " does not accept censored observations");
    }
    switch (rule) {
        case Rule::Log: return log_score(pred, obs.z);
        case Rule::CenLog: return cen_log(pred, obs, weights);
        case Rule::CenLogSimple: return cen_log_simple(pred, obs);
        case Rule::CenContLog: return cen_cont_log(pred, obs);
        case Rule::Brier: return brier(pred, obs.z);
        case Rule::CenBrier: return cen_brier(pred, obs, weights);
        case Rule::Rps: return rps(pred, obs.z);
        case Rule::CenRps: return cen_rps(pred, obs, weights);
        case Rule::Portnoy: break;
    }
    throw std::invalid_argument("portnoy scores a QuantileCurve, not a BinMassCdf");
}

}  // namespace survscore
