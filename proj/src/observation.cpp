#include "survscore/observation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace survscore {

CensoredObservation CensoredObservation::make(double z, bool event) {
    if (!std::isfinite(z) || !(z > 0.0)) {
        throw std::invalid_argument("CensoredObservation: time must be positive and finite");
    }
    return CensoredObservation{z, event};
}

SurvivalDataset::SurvivalDataset(std::vector<SurvivalRow> rows, double z_max)
    : rows_(std::move(rows)), z_max_(z_max) {
    if (rows_.empty()) {
        throw std::invalid_argument("SurvivalDataset: no rows");
    }
    double largest = 0.0;
    for (const auto& row : rows_) {
        if (!std::isfinite(row.obs.z) || !(row.obs.z > 0.0)) {
            throw std::invalid_argument("SurvivalDataset: times must be positive and finite");
        }
        largest = std::max(largest, row.obs.z);
    }
    if (z_max_ == 0.0) {
        z_max_ = largest;
    } else if (largest > z_max_) {
        throw std::invalid_argument("SurvivalDataset: observation exceeds z_max");
    }
}

std::vector<CensoredObservation> SurvivalDataset::observations() const {
    std::vector<CensoredObservation> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) out.push_back(row.obs);
    return out;
}

std::size_t SurvivalDataset::censored_count() const {
    return static_cast<std::size_t>(
        std::count_if(rows_.begin(), rows_.end(), [](const SurvivalRow& r) { return r.obs.censored(); }));
}

std::vector<std::string> SurvivalDataset::groups() const {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& row : rows_) {
        if (seen.insert(row.group).second) out.push_back(row.group);
    }
    return out;
}

SurvivalDataset SurvivalDataset::subset(const std::vector<std::size_t>& indices) const {
    std::vector<SurvivalRow> picked;
    picked.reserve(indices.size());
    for (std::size_t i : indices) picked.push_back(rows_.at(i));
    return SurvivalDataset(std::move(picked), z_max_);
}

}  // namespace survscore
