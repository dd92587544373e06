#include "survscore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "survscore/scoring_rules.hpp"

namespace survscore {

namespace {

std::vector<double> floor_and_normalize(std::span<const double> v) {
    std::vector<double> out(v.size());
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::max(v[i], kKlFloor);
        total += out[i];
    }
    for (double& x : out) x /= total;
    return out;
}

void require_aligned(std::size_t preds, std::size_t obs) {
    if (preds != obs) {
        throw std::invalid_argument("predictions and observations differ in length");
    }
    if (preds == 0) {
        throw std::invalid_argument("no predictions");
    }
}

}  // namespace

double floored_kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size() || p.empty()) {
        throw std::invalid_argument("floored_kl_divergence: size mismatch");
    }
    const auto pn = floor_and_normalize(p);
    const auto qn = floor_and_normalize(q);
    double kl = 0.0;
    for (std::size_t i = 0; i < pn.size(); ++i) {
        kl += pn[i] * (std::log(pn[i]) - std::log(qn[i]));
    }
    // Gibbs' inequality holds exactly; only rounding can push it below zero.
    return std::max(kl, 0.0);
}

BinMassCdf average_cdf(std::span<const BinMassCdf> preds) {
    if (preds.empty()) {
        throw std::invalid_argument("average_cdf: no predictions");
    }
    const auto& grid = preds.front().grid();
    std::vector<double> sum(grid.bins(), 0.0);
    for (const auto& p : preds) {
        if (!(p.grid() == grid)) {
            throw std::invalid_argument("average_cdf: predictions use different grids");
        }
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += p.mass(i);
    }
    for (double& s : sum) s /= static_cast<double>(preds.size());
    return BinMassCdf(grid, std::move(sum));
}

double km_calibration(const KaplanMeierCurve& km, const BinMassCdf& avg_pred) {
    const auto p = km.bin_masses(avg_pred.grid());
    return floored_kl_divergence(p, avg_pred.masses());
}

DCalibration d_calibration(std::span<const BinMassCdf> preds, std::span<const CensoredObservation> obs,
                           std::size_t n_bins) {
    require_aligned(preds.size(), obs.size());
    if (n_bins < 1) {
        throw std::invalid_argument("d_calibration: need at least one bin");
    }
    const double nb = static_cast<double>(n_bins);
    const double width = 1.0 / nb;
    std::vector<double> hist(n_bins, 0.0);
    DCalibration out;
    auto bin_of = [&](double u) {
        return std::min(static_cast<std::size_t>(std::max(u, 0.0) * nb), n_bins - 1);
    };
    for (std::size_t r = 0; r < obs.size(); ++r) {
        const double u = preds[r].cdf_at(std::min(obs[r].z, preds[r].grid().upper()));
        if (obs[r].event) {
            hist[bin_of(u)] += 1.0;
            continue;
        }
        if (u >= 1.0) {
            hist[n_bins - 1] += 1.0;
            ++out.flagged;
            continue;
        }
        const std::size_t k = bin_of(u);
        const double tail = 1.0 - u;
        hist[k] += (static_cast<double>(k + 1) * width - u) / tail;
        for (std::size_t b = k + 1; b < n_bins; ++b) hist[b] += width / tail;
    }
    out.proportions.resize(n_bins);
    const double n = static_cast<double>(obs.size());
    for (std::size_t b = 0; b < n_bins; ++b) {
        out.proportions[b] = hist[b] / n;
        const double d = out.proportions[b] - width;
        out.statistic += d * d;
    }
    return out;
}

MeanScore mean_cen_log_simple(std::span<const BinMassCdf> preds, std::span<const CensoredObservation> obs) {
    require_aligned(preds.size(), obs.size());
    MeanScore out;
    double sum = 0.0;
    for (std::size_t r = 0; r < obs.size(); ++r) {
        const double s = cen_log_simple(preds[r], obs[r]);
        if (std::isinf(s)) ++out.infinite_rows;
        sum += s;
    }
    out.mean = sum / static_cast<double>(obs.size());
    return out;
}

CalibrationReport evaluate_predictions(std::span<const BinMassCdf> preds,
                                       std::span<const CensoredObservation> obs,
                                       std::size_t d_calibration_bins) {
    CalibrationReport report;
    const auto mean = mean_cen_log_simple(preds, obs);
    const auto dcal = d_calibration(preds, obs, d_calibration_bins);
    report.mean_cen_log_simple = mean.mean;
    report.d_calibration = dcal.statistic;
    report.km_calibration = km_calibration(kaplan_meier(obs), average_cdf(preds));
    report.flagged_count = mean.infinite_rows + dcal.flagged;
    return report;
}

}  // namespace survscore
