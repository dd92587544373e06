#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace survscore {

/// Right-censored observation: z = min(t, c) and delta = 1(t <= c).
struct CensoredObservation {
    double z = 0.0;
    bool event = true;

    /// Throws std::invalid_argument unless z is finite and positive.
    static CensoredObservation make(double z, bool event);

    bool censored() const noexcept { return !event; }
    bool operator==(const CensoredObservation&) const = default;
};

/// One training row. Group-table models read `group`, linear models read
/// `features`; either may be empty.
struct SurvivalRow {
    std::string group;
    std::vector<double> features;
    CensoredObservation obs;
};

/// Rows plus the known upper bound on observed times.
class SurvivalDataset {
public:
    SurvivalDataset() = default;
    /// z_max defaults to the largest observed time. Throws
    /// std::invalid_argument for empty data or rows above z_max.
    explicit SurvivalDataset(std::vector<SurvivalRow> rows, double z_max = 0.0);

    const std::vector<SurvivalRow>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }
    const SurvivalRow& operator[](std::size_t i) const { return rows_[i]; }
    double z_max() const noexcept { return z_max_; }

    std::vector<CensoredObservation> observations() const;
    std::size_t censored_count() const;
    /// Distinct group labels in first-seen order.
    std::vector<std::string> groups() const;

    /// Rows selected by index, keeping this dataset's z_max.
    SurvivalDataset subset(const std::vector<std::size_t>& indices) const;

private:
    std::vector<SurvivalRow> rows_;
    double z_max_ = 0.0;
};

}  // namespace survscore
