#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "survscore/distribution.hpp"
#include "survscore/observation.hpp"

namespace survscore {

/// Scores that are mathematically +infinity (log of zero) are returned as this
/// value rather than raising, so empirical means carry the signal.
inline constexpr double kInfiniteScore = std::numeric_limits<double>::infinity();

enum class Rule {
    Portnoy,
    Log,
    CenLog,
    CenLogSimple,
    CenContLog,
    Brier,
    CenBrier,
    Rps,
    CenRps,
};

inline constexpr Rule kAllRules[] = {Rule::Portnoy,    Rule::Log,   Rule::CenLog,
                                     Rule::CenLogSimple, Rule::CenContLog, Rule::Brier,
                                     Rule::CenBrier,   Rule::Rps,   Rule::CenRps};

std::string_view rule_name(Rule rule);
/// Accepts the names produced by rule_name; throws std::invalid_argument.
Rule parse_rule(std::string_view name);

/// Portnoy scores a QuantileCurve; every other rule scores a BinMassCdf.
constexpr bool is_quantile_rule(Rule r) { return r == Rule::Portnoy; }
/// Rules whose value depends on externally supplied weights.
constexpr bool needs_weights(Rule r) {
    return r == Rule::Portnoy || r == Rule::CenLog || r == Rule::CenBrier || r == Rule::CenRps;
}
/// Log, Brier and RPS only accept uncensored observations.
constexpr bool accepts_censoring(Rule r) {
    return r != Rule::Log && r != Rule::Brier && r != Rule::Rps;
}

/// Per-bin (or per-threshold) weights in [0, 1].
///
/// Layout by rule, for a grid with B bins (all vectors have length B):
///   - Cen-log, Cen-Brier: entry i belongs to bin (zeta_i, zeta_{i+1}].
///   - Cen-RPS: entry i belongs to threshold zeta_i, i = 1..B-1; entry 0 unused.
///   - Portnoy: entry j belongs to level tau_j, j = 1..B-1; entry 0 unused.
class WeightVector {
public:
    WeightVector() = default;
    /// Throws std::invalid_argument if any entry is outside [0, 1].
    explicit WeightVector(std::vector<double> weights);
    static WeightVector zeros(std::size_t n) { return WeightVector(std::vector<double>(n, 0.0)); }

    std::size_t size() const noexcept { return w_.size(); }
    bool empty() const noexcept { return w_.empty(); }
    double operator[](std::size_t i) const { return w_[i]; }
    std::span<const double> values() const noexcept { return w_; }
    double sum() const;

    bool operator==(const WeightVector&) const = default;

private:
    std::vector<double> w_;
};

struct PortnoyConfig {
    double tau = 0.5;
    double z_infinity = 0.0;
    double w = 1.0;
};

/// Check function rho_tau(q, y).
double pinball(double predicted_quantile, double y, double tau);

/// Censored pinball loss at a single level tau of the curve. z_infinity must
/// exceed the curve's upper end.
double portnoy(const QuantileCurve& pred, const CensoredObservation& obs, const PortnoyConfig& cfg);

/// Portnoy loss summed over the interior levels tau_1..tau_{B-1}; the end
/// levels are pinned to 0 and z_max and carry no information. `level_weights`
/// follows the WeightVector layout for Portnoy.
double portnoy_curve(const QuantileCurve& pred, const CensoredObservation& obs,
                     const WeightVector& level_weights, double z_infinity);

double log_score(const BinMassCdf& pred, double y);
double cen_log(const BinMassCdf& pred, const CensoredObservation& obs, const WeightVector& weights);
double cen_log_simple(const BinMassCdf& pred, const CensoredObservation& obs);
double cen_cont_log(const BinMassCdf& pred, const CensoredObservation& obs);

double brier(const BinMassCdf& pred, double y);
double cen_brier(const BinMassCdf& pred, const CensoredObservation& obs, const WeightVector& weights);

double cen_binary_brier(const BinMassCdf& pred, const CensoredObservation& obs, double zeta, double w);
double rps(const BinMassCdf& pred, double y);
/// Sum of cen_binary_brier over the interior thresholds. B = 1 has none and
/// scores 0.
double cen_rps(const BinMassCdf& pred, const CensoredObservation& obs, const WeightVector& weights);

/// Dispatch for the distribution rules. `weights` is read only by rules with
/// needs_weights(); Log/Brier/RPS reject censored observations.
double score(Rule rule, const BinMassCdf& pred, const CensoredObservation& obs,
             const WeightVector& weights = {});

}  // namespace survscore
