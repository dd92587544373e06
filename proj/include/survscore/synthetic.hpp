#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "survscore/censoring_weights.hpp"
#include "survscore/distribution.hpp"
#include "survscore/grid.hpp"
#include "survscore/observation.hpp"
#include "survscore/scoring_rules.hpp"

namespace survscore {

struct CensorAtom {
    double c = 0.0;
    double prob = 0.0;

    bool operator==(const CensorAtom&) const = default;
};

/// Event-time law with a piecewise-linear CDF (uniform within bins) and an
/// independent censoring law: finitely many atoms, or a piecewise-linear CDF
/// on the same grid.
class PiecewiseLinearTruth {
public:
    /// Atom probabilities must sum to one (within 1e-9) and every c must lie
    /// in (0, zeta_B]. Atoms are kept sorted by c.
    PiecewiseLinearTruth(BinMassCdf event, std::vector<CensorAtom> atoms, std::string group = {});
    PiecewiseLinearTruth(BinMassCdf event, BinMassCdf censoring, std::string group = {});

    const BinMassCdf& event() const noexcept { return event_; }
    const TimeGrid& grid() const noexcept { return event_.grid(); }
    const std::vector<CensorAtom>& atoms() const noexcept { return atoms_; }
    const std::optional<BinMassCdf>& continuous_censoring() const noexcept { return censoring_; }
    bool atom_censoring() const noexcept { return !censoring_; }
    const std::string& group() const noexcept { return group_; }

    /// Pr(T > C).
    double censoring_fraction() const;

private:
    BinMassCdf event_;
    std::vector<CensorAtom> atoms_;
    std::optional<BinMassCdf> censoring_;
    std::string group_;
};

/// n draws of (min(t, c), 1(t <= c)); rows carry the truth's group label.
SurvivalDataset sample_dataset(const PiecewiseLinearTruth& truth, std::size_t n, std::uint64_t seed);

/// n_per_group draws from each truth, interleaved group by group. Rows get
/// one numeric feature, the index of their truth.
SurvivalDataset sample_dataset(std::span<const PiecewiseLinearTruth> truths, std::size_t n_per_group,
                               std::uint64_t seed);

/// Quantile function of the truth at each level of `grid`; the top level is
/// pinned to zeta_B.
QuantileCurve truth_quantile_curve(const BinMassCdf& event, const QuantileGrid& grid);

/// Integral of rho_tau(q, t) over t in [a, b].
double pinball_integral(double q, double a, double b, double tau);

struct ExpectationOptions {
    double z_infinity_factor = 1.05;
    WeightPolicy policy;
    /// Negative control: every weight read for a censored row is replaced by
    /// policy.fallback_w (Cen-Brier: one-hot at the censoring bin), as if the
    /// censored time were an event.
    bool corrupt_weights = false;
};

/// Exact E[S(candidate; Z, Delta)] under the truth with weights computed from
/// the true F. Needs atom censoring. Log, Brier and RPS need every atom at
/// zeta_B (no effective censoring).
double expected_score(const PiecewiseLinearTruth& truth, const BinMassCdf& candidate, Rule rule,
                      const ExpectationOptions& opts = {});
/// Portnoy version: the curve is scored at its interior levels with
/// z_infinity = factor * zeta_B.
double expected_score(const PiecewiseLinearTruth& truth, const QuantileCurve& candidate,
                      const ExpectationOptions& opts = {});

struct PropernessReport {
    Rule rule = Rule::CenLog;
    std::size_t bins = 0;
    std::size_t n_perturbations = 0;
    double perturbation_scale = 0.0;
    double tolerance = 0.0;
    /// Empty when there were no perturbations.
    std::optional<double> min_gap;
    std::size_t violations = 0;
    /// Candidates at TV distance >= distinct_tv from the truth, and their
    /// smallest gap.
    std::size_t distinct_candidates = 0;
    std::optional<double> min_distinct_gap;
};

struct PropernessOptions {
    ExpectationOptions expectation;
    double distinct_tv = 0.01;
};

/// Perturbs the true logits (log bin masses, or log quantile increments for
/// Portnoy) with N(0, scale^2) noise and records
/// gap = E[S(candidate)] - E[S(truth)].
PropernessReport properness_check(const PiecewiseLinearTruth& truth, Rule rule, std::size_t n_perturbations,
                                  double perturbation_scale, std::uint64_t seed, double tolerance,
                                  const PropernessOptions& opts = {});

enum class CensoringPattern { Light, Heavy, BoundaryAtom };

std::string_view censoring_pattern_name(CensoringPattern p);

/// Censoring atoms at fixed fractions of zeta_B; every pattern keeps an atom
/// at zeta_B so part of the population is never censored. BoundaryAtom puts
/// its other atoms exactly on grid knots.
std::vector<CensorAtom> censoring_atoms(CensoringPattern pattern, const TimeGrid& grid);

/// Smooth unimodal bin masses on `bins` equal bins over [0, upper].
BinMassCdf reference_event_distribution(std::size_t bins, double upper = 2.0);

/// The two-group truth ("a", "b") on 8 bins over [0, 2]. Censoring atoms are
/// spread evenly over (0, 1.75], off every dyadic refinement of the grid, with
/// the rest of the censoring mass at 2 (never censoring).
std::vector<PiecewiseLinearTruth> default_truths();

/// For each B, the truth re-binned to B equal bins over [0, zeta_B] is scored
/// on one sampled dataset by Cen-log (true weights) and Cen-log-simple;
/// returns |mean difference| per B.
std::vector<double> cen_log_b_convergence(const PiecewiseLinearTruth& truth, std::span<const std::size_t> b_list,
                                          std::size_t n, std::uint64_t seed);

/// Truth's CDF evaluated on another grid's knots over the same [0, zeta_B].
BinMassCdf rebin(const BinMassCdf& dist, const TimeGrid& grid);

}  // namespace survscore
