#pragma once

#include <span>
#include <vector>

#include "survscore/grid.hpp"
#include "survscore/observation.hpp"

namespace survscore {

/// Product-limit survival estimate, a right-continuous step function with
/// kappa(0) = 1 that drops at each distinct event time.
class KaplanMeierCurve {
public:
    KaplanMeierCurve() = default;
    KaplanMeierCurve(std::vector<double> event_times, std::vector<double> survival);

    std::span<const double> event_times() const noexcept { return times_; }
    std::span<const double> survival() const noexcept { return surv_; }

    /// kappa(t) for t >= 0.
    double at(double t) const;

    /// Bin masses kappa(zeta_i) - kappa(zeta_{i+1}) with kappa(zeta_B) taken as
    /// 0, so whatever survival remains at the last interior threshold lands in
    /// the final bin.
    std::vector<double> bin_masses(const TimeGrid& grid) const;

private:
    std::vector<double> times_;
    std::vector<double> surv_;
};

KaplanMeierCurve kaplan_meier(std::span<const CensoredObservation> obs);
KaplanMeierCurve kaplan_meier(const SurvivalDataset& data);

}  // namespace survscore
