#include "survscore/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace survscore {

void softmax(std::span<const double> logits, std::span<double> out) {
    const double shift = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t k = 0; k < logits.size(); ++k) {
        out[k] = std::exp(logits[k] - shift);
        total += out[k];
    }
    for (std::size_t k = 0; k < logits.size(); ++k) out[k] /= total;
}

void softmax_backward(std::span<const double> p, std::span<const double> grad_p, std::span<double> grad_logits) {
    double dot = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) dot += p[k] * grad_p[k];
    for (std::size_t k = 0; k < p.size(); ++k) grad_logits[k] = p[k] * (grad_p[k] - dot);
}

std::vector<double> softmax_masses(std::span<const double> logits) {
    std::vector<double> p(logits.size());
    softmax(logits, p);
    double total = 0.0;
    for (double& x : p) {
        x = std::max(x, kMassFloor);
        total += x;
    }
    for (double& x : p) x /= total;
    return p;
}

QuantileCurve quantile_curve_from_increments(const QuantileGrid& grid, std::span<const double> increments,
                                             double z_max) {
    if (increments.size() != grid.bins()) {
        throw std::invalid_argument("quantile curve: one increment per quantile step required");
    }
    if (!(z_max > 0.0)) {
        throw std::invalid_argument("quantile curve: z_max must be positive");
    }
    std::vector<double> values(grid.bins() + 1, 0.0);
    double cum = 0.0;
    for (std::size_t j = 1; j < grid.bins(); ++j) {
        cum += increments[j - 1];
        values[j] = z_max * cum;
    }
    values.back() = z_max;
    return QuantileCurve(grid, std::move(values));
}

LogitModel LogitModel::group_table(std::vector<std::string> groups, std::size_t outputs) {
    if (groups.empty() || outputs < 1) {
        throw std::invalid_argument("group_table: need at least one group and one output");
    }
    LogitModel m;
    m.kind_ = Kind::GroupTable;
    m.outputs_ = outputs;
    m.groups_ = std::move(groups);
    for (std::size_t g = 0; g < m.groups_.size(); ++g) {
        if (!m.group_lookup_.emplace(m.groups_[g], g).second) {
            throw std::invalid_argument("group_table: duplicate group '" + m.groups_[g] + "'");
        }
    }
    m.params_.assign(m.groups_.size() * outputs, 0.0);
    return m;
}

LogitModel LogitModel::linear(std::size_t n_features, std::size_t outputs, std::vector<double> mean,
                              std::vector<double> scale) {
    if (outputs < 1) {
        throw std::invalid_argument("linear: need at least one output");
    }
    if (mean.empty()) mean.assign(n_features, 0.0);
    if (scale.empty()) scale.assign(n_features, 1.0);
    if (mean.size() != n_features || scale.size() != n_features) {
        throw std::invalid_argument("linear: standardization size mismatch");
    }
    for (double s : scale) {
        if (!(s > 0.0)) throw std::invalid_argument("linear: feature scale must be positive");
    }
    LogitModel m;
    m.kind_ = Kind::Linear;
    m.outputs_ = outputs;
    m.n_features_ = n_features;
    m.mean_ = std::move(mean);
    m.scale_ = std::move(scale);
    m.params_.assign(outputs * (n_features + 1), 0.0);
    return m;
}

LogitModel LogitModel::linear_for(const SurvivalDataset& data, std::size_t outputs) {
    const std::size_t d = data.empty() ? 0 : data[0].features.size();
    std::vector<double> mean(d, 0.0);
    std::vector<double> scale(d, 1.0);
    const double n = static_cast<double>(data.size());
    for (const auto& row : data.rows()) {
        if (row.features.size() != d) {
            throw std::invalid_argument("linear_for: rows have different feature counts");
        }
        for (std::size_t j = 0; j < d; ++j) mean[j] += row.features[j] / n;
    }
    for (std::size_t j = 0; j < d; ++j) {
        double var = 0.0;
        for (const auto& row : data.rows()) {
            const double c = row.features[j] - mean[j];
            var += c * c / n;
        }
        scale[j] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    return linear(d, outputs, std::move(mean), std::move(scale));
}

std::size_t LogitModel::group_index(const std::string& group) const {
    auto it = group_lookup_.find(group);
    if (it == group_lookup_.end()) {
        throw std::out_of_range("unknown group label '" + group + "'");
    }
    return it->second;
}

void LogitModel::logits(const SurvivalRow& row, std::span<double> out) const {
    if (kind_ == Kind::GroupTable) {
        const std::size_t g = group_index(row.group);
        std::copy_n(params_.begin() + static_cast<std::ptrdiff_t>(g * outputs_), outputs_, out.begin());
        return;
    }
    if (row.features.size() != n_features_) {
        throw std::invalid_argument("linear model: expected " + std::to_string(n_features_) + " features");
    }
    const std::size_t stride = n_features_ + 1;
    for (std::size_t k = 0; k < outputs_; ++k) {
        const double* w = params_.data() + k * stride;
        double a = w[0];
        for (std::size_t j = 0; j < n_features_; ++j) {
            a += w[j + 1] * (row.features[j] - mean_[j]) / scale_[j];
        }
        out[k] = a;
    }
}

void LogitModel::accumulate_gradient(const SurvivalRow& row, std::span<const double> grad_logits,
                                     std::span<double> grad_params) const {
    if (kind_ == Kind::GroupTable) {
        const std::size_t base = group_index(row.group) * outputs_;
        for (std::size_t k = 0; k < outputs_; ++k) grad_params[base + k] += grad_logits[k];
        return;
    }
    const std::size_t stride = n_features_ + 1;
    for (std::size_t k = 0; k < outputs_; ++k) {
        double* g = grad_params.data() + k * stride;
        g[0] += grad_logits[k];
        for (std::size_t j = 0; j < n_features_; ++j) {
            g[j + 1] += grad_logits[k] * (row.features[j] - mean_[j]) / scale_[j];
        }
    }
}

BinMassCdf LogitModel::predict_distribution(const SurvivalRow& row, const TimeGrid& grid) const {
    if (grid.bins() != outputs_) {
        throw std::invalid_argument("predict_distribution: grid has " + std::to_string(grid.bins()) +
                                    " bins, model has " + std::to_string(outputs_) + " outputs");
    }
    std::vector<double> a(outputs_);
    logits(row, a);
    return BinMassCdf(grid, softmax_masses(a));
}

QuantileCurve LogitModel::predict_quantiles(const SurvivalRow& row, const QuantileGrid& grid, double z_max) const {
    if (grid.bins() != outputs_) {
        throw std::invalid_argument("predict_quantiles: grid/output size mismatch");
    }
    std::vector<double> a(outputs_);
    logits(row, a);
    return quantile_curve_from_increments(grid, softmax_masses(a), z_max);
}

}  // namespace survscore
