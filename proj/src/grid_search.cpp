#include "survscore/grid_search.hpp"

#include <algorithm>
#include <stdexcept>

#include "survscore/scoring_rules.hpp"

namespace survscore {

namespace {

double weighted_objective(const std::vector<double>& z, const std::vector<double>& w, double z_infinity,
                          double tau, double q) {
    double total = 0.0;
    for (std::size_t r = 0; r < z.size(); ++r) {
        total += w[r] * pinball(q, z[r], tau);
        if (w[r] < 1.0) total += (1.0 - w[r]) * pinball(q, z_infinity, tau);
    }
    return total;
}

}  // namespace

double weighted_portnoy_minimizer(const std::vector<double>& z, const std::vector<double>& w, double z_infinity,
                                  double tau, double lo, double hi, std::size_t iters) {
    for (std::size_t it = 0; it < iters && hi > lo; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (weighted_objective(z, w, z_infinity, tau, m1) < weighted_objective(z, w, z_infinity, tau, m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    return 0.5 * (lo + hi);
}

std::size_t repair_monotone(std::vector<double>& values, double upper) {
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("repair_monotone: need at least two values");
    const std::vector<double> original = values;
    values.front() = 0.0;
    values.back() = upper;

    // PAV over the interior entries.
    struct Block {
        double mean;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        blocks.push_back({values[j], 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
            const Block last = blocks.back();
            blocks.pop_back();
            Block& prev = blocks.back();
            prev.mean = (prev.mean * static_cast<double>(prev.count) + last.mean * static_cast<double>(last.count)) /
                        static_cast<double>(prev.count + last.count);
            prev.count += last.count;
        }
    }
    std::size_t j = 1;
    for (const auto& b : blocks) {
        for (std::size_t k = 0; k < b.count; ++k) values[j++] = b.mean;
    }

    const double gap = upper * 1e-9;
    for (std::size_t k = 1; k + 1 < n; ++k) values[k] = std::max(values[k], values[k - 1] + gap);
    for (std::size_t k = n - 1; k-- > 1;) values[k] = std::min(values[k], values[k + 1] - gap);

    std::size_t changed = 0;
    for (std::size_t k = 1; k + 1 < n; ++k) changed += values[k] != original[k] ? 1 : 0;
    return changed;
}

GridSearchFit grid_search_fit_quantiles(const SurvivalDataset& data, const QuantileGrid& grid,
                                        const WeightPolicy& policy, const GridSearchConfig& cfg,
                                        std::vector<std::string> groups) {
    if (!(policy.fallback_w >= 0.0 && policy.fallback_w <= 1.0)) {
        throw std::invalid_argument("grid search: fallback weight outside [0, 1]");
    }
    if (!(cfg.z_infinity_factor > 1.0)) {
        throw std::invalid_argument("grid search: z_infinity factor must exceed 1");
    }
    if (groups.empty()) groups = data.groups();
    const double z_max = data.z_max();
    const double z_inf = cfg.z_infinity_factor * z_max;
    const auto levels = grid.levels();
    const std::size_t b = grid.bins();

    GridSearchFit fit;
    for (const auto& group : groups) {
        std::vector<double> z;
        std::vector<bool> event;
        for (const auto& row : data.rows()) {
            if (row.group != group) continue;
            z.push_back(row.obs.z);
            event.push_back(row.obs.event);
        }
        if (z.empty()) {
            throw std::invalid_argument("grid search: group '" + group + "' has no rows");
        }

        std::vector<double> q(b + 1, 0.0);
        q[b] = z_max;
        std::vector<double> w(z.size());
        for (std::size_t j = 1; j < b; ++j) {
            const double tau = levels[j];
            for (std::size_t r = 0; r < z.size(); ++r) {
                if (event[r]) {
                    w[r] = 1.0;
                    continue;
                }
                w[r] = policy.fallback_w;
                for (std::size_t m = 1; m < j; ++m) {
                    if (q[m] >= z[r]) {
                        w[r] = std::clamp((tau - levels[m]) / (1.0 - levels[m]), 0.0, 1.0);
                        break;
                    }
                }
            }
            q[j] = weighted_portnoy_minimizer(z, w, z_inf, tau, 0.0, z_max, cfg.ternary_iters);
        }
        fit.repairs += repair_monotone(q, z_max);
        fit.groups.push_back(group);
        fit.curves.emplace_back(grid, std::move(q));
    }
    return fit;
}

}  // namespace survscore
