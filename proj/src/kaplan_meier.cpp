#include "survscore/kaplan_meier.hpp"

#include <algorithm>
#include <stdexcept>

namespace survscore {

KaplanMeierCurve::KaplanMeierCurve(std::vector<double> event_times, std::vector<double> survival)
    : times_(std::move(event_times)), surv_(std::move(survival)) {
    if (times_.size() != surv_.size()) {
        throw std::invalid_argument("KaplanMeierCurve: times and survival differ in length");
    }
}

double KaplanMeierCurve::at(double t) const {
    // Last event time <= t.
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 1.0;
    return surv_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

std::vector<double> KaplanMeierCurve::bin_masses(const TimeGrid& grid) const {
    const std::size_t b = grid.bins();
    std::vector<double> p(b);
    double prev = 1.0;
    for (std::size_t i = 0; i < b; ++i) {
        const double next = (i + 1 == b) ? 0.0 : at(grid[i + 1]);
        p[i] = std::max(prev - next, 0.0);
        prev = next;
    }
    return p;
}

KaplanMeierCurve kaplan_meier(std::span<const CensoredObservation> obs) {
    std::vector<CensoredObservation> sorted(obs.begin(), obs.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const CensoredObservation& a, const CensoredObservation& b) { return a.z < b.z; });

    std::vector<double> times;
    std::vector<double> surv;
    double s = 1.0;
    std::size_t at_risk = sorted.size();
    std::size_t k = 0;
    while (k < sorted.size()) {
        const double t = sorted[k].z;
        std::size_t events = 0;
        std::size_t tied = 0;
        while (k + tied < sorted.size() && sorted[k + tied].z == t) {
            events += sorted[k + tied].event ? 1 : 0;
            ++tied;
        }
        if (events > 0) {
            s *= 1.0 - static_cast<double>(events) / static_cast<double>(at_risk);
            times.push_back(t);
            surv.push_back(s);
        }
        at_risk -= tied;
        k += tied;
    }
    return KaplanMeierCurve(std::move(times), std::move(surv));
}

KaplanMeierCurve kaplan_meier(const SurvivalDataset& data) {
    const auto obs = data.observations();
    return kaplan_meier(std::span<const CensoredObservation>(obs));
}

}  // namespace survscore
