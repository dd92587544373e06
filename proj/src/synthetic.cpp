#include "survscore/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "survscore/model.hpp"

namespace survscore {

namespace {

// Uniform draw strictly inside (0, 1) from the top 53 bits.
double unit_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<CensorAtom> normalize_atoms(std::vector<CensorAtom> atoms, double upper) {
    if (atoms.empty()) throw std::invalid_argument("censoring: need at least one atom");
    std::sort(atoms.begin(), atoms.end(), [](const CensorAtom& a, const CensorAtom& b) { return a.c < b.c; });
    std::vector<CensorAtom> merged;
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.c > 0.0 && a.c <= upper)) {
            throw std::invalid_argument("censoring: atom outside (0, zeta_B]");
        }
        if (!(a.prob >= 0.0)) throw std::invalid_argument("censoring: negative atom probability");
        total += a.prob;
        if (!merged.empty() && merged.back().c == a.c) {
            merged.back().prob += a.prob;
        } else {
            merged.push_back(a);
        }
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("censoring: atom probabilities must sum to 1");
    }
    return merged;
}

double draw_censoring(const PiecewiseLinearTruth& truth, std::mt19937_64& rng) {
    const double u = unit_open(rng);
    if (truth.continuous_censoring()) return truth.continuous_censoring()->quantile_at(u);
    double acc = 0.0;
    for (const auto& a : truth.atoms()) {
        acc += a.prob;
        if (u <= acc) return a.c;
    }
    return truth.atoms().back().c;
}

SurvivalRow draw_row(const PiecewiseLinearTruth& truth, std::mt19937_64& rng) {
    const double t = truth.event().quantile_at(unit_open(rng));
    const double c = draw_censoring(truth, rng);
    SurvivalRow row;
    row.group = truth.group();
    row.obs = CensoredObservation::make(std::min(t, c), t <= c);
    return row;
}

WeightVector censored_weights(Rule rule, const BinMassCdf& truth, double c, const TimeGrid& grid,
                              const ExpectationOptions& opts) {
    const CensoredObservation obs{c, false};
    if (!opts.corrupt_weights) return distribution_rule_weights(rule, CdfRef(truth), obs, grid).weights;
    if (rule == Rule::CenBrier) {
        std::vector<double> w(grid.bins(), 0.0);
        w[grid.bin_of(c)] = 1.0;
        return WeightVector(std::move(w));
    }
    return WeightVector(std::vector<double>(grid.bins(), opts.policy.fallback_w));
}

// E over t of the score with censoring fixed at c.
double expected_given_c(const BinMassCdf& truth, const BinMassCdf& cand, Rule rule, double c,
                        const ExpectationOptions& opts) {
    const auto& grid = truth.grid();
    const std::size_t j = grid.bin_of(c);
    double total = 0.0;
    for (std::size_t i = 0; i <= j; ++i) {
        const double p = i < j ? truth.mass(i) : truth.cdf_at(c) - truth.cdf_at_knot(j);
        if (p <= 0.0) continue;
        // Event scores only depend on the bin of t.
        const CensoredObservation obs{0.5 * (grid[i] + std::min(grid[i + 1], c)), true};
        const auto w = distribution_rule_weights(rule, CdfRef(truth), obs, grid).weights;
        total += p * score(rule, cand, obs, w);
    }
    const double surv = c >= grid.upper() ? 0.0 : truth.survival_at(c);
    if (surv > 0.0) {
        total += surv * score(rule, cand, CensoredObservation{c, false}, censored_weights(rule, truth, c, grid, opts));
    }
    return total;
}

void require_atoms(const PiecewiseLinearTruth& truth) {
    if (!truth.atom_censoring()) {
        throw std::invalid_argument("expected_score: exact expectation needs atom censoring");
    }
}

}  // namespace

PiecewiseLinearTruth::PiecewiseLinearTruth(BinMassCdf event, std::vector<CensorAtom> atoms, std::string group)
    : event_(std::move(event)), group_(std::move(group)) {
    atoms_ = normalize_atoms(std::move(atoms), event_.grid().upper());
}

PiecewiseLinearTruth::PiecewiseLinearTruth(BinMassCdf event, BinMassCdf censoring, std::string group)
    : event_(std::move(event)), censoring_(std::move(censoring)), group_(std::move(group)) {
    if (!(censoring_->grid() == event_.grid())) {
        throw std::invalid_argument("censoring distribution must share the event grid");
    }
}

double PiecewiseLinearTruth::censoring_fraction() const {
    if (atom_censoring()) {
        double frac = 0.0;
        for (const auto& a : atoms_) {
            frac += a.prob * (a.c >= grid().upper() ? 0.0 : event_.survival_at(a.c));
        }
        return frac;
    }
    // Both densities are constant within each bin: Pr(T > C) per bin is the
    // product of masses over bins below plus half the same-bin product.
    double frac = 0.0;
    for (std::size_t i = 0; i < grid().bins(); ++i) {
        const double g = censoring_->mass(i);
        frac += g * (event_.survival_at_knot(i + 1) + 0.5 * event_.mass(i));
    }
    return frac;
}

SurvivalDataset sample_dataset(const PiecewiseLinearTruth& truth, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_dataset: n must be positive");
    std::mt19937_64 rng(seed);
    std::vector<SurvivalRow> rows;
    rows.reserve(n);
    for (std::size_t r = 0; r < n; ++r) rows.push_back(draw_row(truth, rng));
    return SurvivalDataset(std::move(rows), truth.grid().upper());
}

SurvivalDataset sample_dataset(std::span<const PiecewiseLinearTruth> truths, std::size_t n_per_group,
                               std::uint64_t seed) {
    if (truths.empty() || n_per_group < 1) {
        throw std::invalid_argument("sample_dataset: need truths and a positive group size");
    }
    const double upper = truths.front().grid().upper();
    std::mt19937_64 rng(seed);
    std::vector<SurvivalRow> rows;
    rows.reserve(truths.size() * n_per_group);
    for (std::size_t r = 0; r < n_per_group; ++r) {
        for (std::size_t g = 0; g < truths.size(); ++g) {
            auto row = draw_row(truths[g], rng);
            row.features = {static_cast<double>(g)};
            rows.push_back(std::move(row));
        }
    }
    double z_max = upper;
    for (const auto& t : truths) z_max = std::max(z_max, t.grid().upper());
    return SurvivalDataset(std::move(rows), z_max);
}

QuantileCurve truth_quantile_curve(const BinMassCdf& event, const QuantileGrid& grid) {
    std::vector<double> q(grid.levels().size());
    for (std::size_t j = 0; j < q.size(); ++j) q[j] = event.quantile_at(grid[j]);
    q.back() = event.grid().upper();
    return QuantileCurve(grid, std::move(q));
}

double pinball_integral(double q, double a, double b, double tau) {
    if (b <= a) return 0.0;
    // Below q: (1 - tau)(q - t); above q: tau (t - q).
    double total = 0.0;
    const double lo_end = std::min(b, q);
    if (lo_end > a) {
        const double d0 = q - a;
        const double d1 = q - lo_end;
        total += (1.0 - tau) * 0.5 * (d0 * d0 - d1 * d1);
    }
    const double hi_start = std::max(a, q);
    if (b > hi_start) {
        const double d0 = hi_start - q;
        const double d1 = b - q;
        total += tau * 0.5 * (d1 * d1 - d0 * d0);
    }
    return total;
}

double expected_score(const PiecewiseLinearTruth& truth, const BinMassCdf& candidate, Rule rule,
                      const ExpectationOptions& opts) {
    require_atoms(truth);
    if (is_quantile_rule(rule)) {
        throw std::invalid_argument("expected_score: portnoy scores a QuantileCurve");
    }
    if (!(candidate.grid() == truth.grid())) {
        throw std::invalid_argument("expected_score: candidate grid differs from the truth's");
    }
    double total = 0.0;
    for (const auto& a : truth.atoms()) {
        total += a.prob * expected_given_c(truth.event(), candidate, rule, a.c, opts);
    }
    return total;
}

double expected_score(const PiecewiseLinearTruth& truth, const QuantileCurve& candidate,
                      const ExpectationOptions& opts) {
    require_atoms(truth);
    const auto& f = truth.event();
    const auto& grid = f.grid();
    const double z_inf = opts.z_infinity_factor * grid.upper();
    if (!(z_inf > candidate.upper())) {
        throw std::invalid_argument("expected_score: z_infinity must exceed the curve's upper end");
    }
    const auto levels = candidate.grid().levels();
    const auto q = candidate.values();
    const std::size_t b = levels.size() - 1;
    double total = 0.0;
    for (const auto& a : truth.atoms()) {
        const double c = a.c;
        const double surv = c >= grid.upper() ? 0.0 : f.survival_at(c);
        double given_c = 0.0;
        for (std::size_t j = 1; j < b; ++j) {
            const double tau = levels[j];
            for (std::size_t i = 0; i < grid.bins() && grid[i] < c; ++i) {
                const double hi = std::min(grid[i + 1], c);
                given_c += f.mass(i) / grid.width(i) * pinball_integral(q[j], grid[i], hi, tau);
            }
            if (surv > 0.0) {
                const double w =
                    opts.corrupt_weights ? opts.policy.fallback_w : portnoy_weight(CdfRef(f), c, tau, opts.policy).w;
                given_c += surv * (w * pinball(q[j], c, tau) + (1.0 - w) * pinball(q[j], z_inf, tau));
            }
        }
        total += a.prob * given_c;
    }
    return total;
}

PropernessReport properness_check(const PiecewiseLinearTruth& truth, Rule rule, std::size_t n_perturbations,
                                  double perturbation_scale, std::uint64_t seed, double tolerance,
                                  const PropernessOptions& opts) {
    const auto& f = truth.event();
    const auto& grid = f.grid();
    const std::size_t b = grid.bins();

    PropernessReport report;
    report.rule = rule;
    report.bins = b;
    report.n_perturbations = n_perturbations;
    report.perturbation_scale = perturbation_scale;
    report.tolerance = tolerance;

    const bool quantile = is_quantile_rule(rule);
    const QuantileGrid qgrid = uniform_quantile_grid(b);
    std::vector<double> base(b);
    double reference = 0.0;
    if (quantile) {
        const auto curve = truth_quantile_curve(f, qgrid);
        for (std::size_t j = 0; j < b; ++j) {
            base[j] = std::log((curve.values()[j + 1] - curve.values()[j]) / grid.upper());
        }
        reference = expected_score(truth, curve, opts.expectation);
    } else {
        for (std::size_t i = 0; i < b; ++i) base[i] = std::log(f.mass(i));
        reference = expected_score(truth, f, rule, opts.expectation);
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, perturbation_scale);
    std::vector<double> logits(b);
    for (std::size_t k = 0; k < n_perturbations; ++k) {
        for (std::size_t i = 0; i < b; ++i) logits[i] = base[i] + noise(rng);
        const auto p = softmax_masses(logits);
        double gap = 0.0;
        double tv = 0.0;
        if (quantile) {
            const auto curve = quantile_curve_from_increments(qgrid, p, grid.upper());
            gap = expected_score(truth, curve, opts.expectation) - reference;
            tv = total_variation(curve.to_bin_masses(grid).masses(), f.masses());
        } else {
            const BinMassCdf cand(grid, p);
            gap = expected_score(truth, cand, rule, opts.expectation) - reference;
            tv = total_variation(cand.masses(), f.masses());
        }
        report.min_gap = report.min_gap ? std::min(*report.min_gap, gap) : gap;
        if (gap < -tolerance) ++report.violations;
        if (tv >= opts.distinct_tv) {
            ++report.distinct_candidates;
            report.min_distinct_gap = report.min_distinct_gap ? std::min(*report.min_distinct_gap, gap) : gap;
        }
    }
    return report;
}

std::string_view censoring_pattern_name(CensoringPattern p) {
    switch (p) {
        case CensoringPattern::Light: return "light";
        case CensoringPattern::Heavy: return "heavy";
        case CensoringPattern::BoundaryAtom: return "boundary-atom";
    }
    return "unknown";
}

std::vector<CensorAtom> censoring_atoms(CensoringPattern pattern, const TimeGrid& grid) {
    const double u = grid.upper();
    const std::size_t b = grid.bins();
    std::vector<CensorAtom> atoms;
    switch (pattern) {
        case CensoringPattern::Light:
            atoms = {{0.37 * u, 0.1}, {0.81 * u, 0.1}, {u, 0.8}};
            break;
        case CensoringPattern::Heavy:
            atoms = {{0.13 * u, 0.3}, {0.46 * u, 0.3}, {0.72 * u, 0.3}, {u, 0.1}};
            break;
        case CensoringPattern::BoundaryAtom:
            atoms = {{grid[1], 0.3}, {grid[(b + 1) / 2], 0.3}, {u, 0.4}};
            break;
    }
    return normalize_atoms(std::move(atoms), u);
}

BinMassCdf reference_event_distribution(std::size_t bins, double upper) {
    const TimeGrid grid = uniform_time_grid(upper, bins, 0.0);
    std::vector<double> m(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(bins);
        const double d = (x - 0.35) / 0.3;
        m[i] = (0.3 + std::exp(-d * d)) / static_cast<double>(bins);
    }
    return BinMassCdf(grid, std::move(m));
}

namespace {

// `count` equal atoms at the midpoints of `count` equal cells of (0, hi],
// carrying `prob` in total, plus the remaining mass at `end`.
std::vector<CensorAtom> spread_atoms(double hi, std::size_t count, double prob, double end) {
    std::vector<CensorAtom> atoms;
    for (std::size_t k = 0; k < count; ++k) {
        atoms.push_back({hi * (static_cast<double>(k) + 0.5) / static_cast<double>(count), prob / count});
    }
    atoms.push_back({end, 1.0 - prob});
    return atoms;
}

}  // namespace

std::vector<PiecewiseLinearTruth> default_truths() {
    const TimeGrid grid = uniform_time_grid(2.0, 8, 0.0);
    // Censoring times spread evenly below the last bin, on a spacing that no
    // dyadic refinement of the grid lines up with.
    std::vector<PiecewiseLinearTruth> truths;
    truths.emplace_back(BinMassCdf(grid, {0.04, 0.10, 0.18, 0.20, 0.17, 0.13, 0.10, 0.08}),
                        spread_atoms(1.75, 29, 0.6, 2.0), "a");
    truths.emplace_back(BinMassCdf(grid, {0.22, 0.20, 0.16, 0.12, 0.10, 0.08, 0.07, 0.05}),
                        spread_atoms(1.75, 23, 0.7, 2.0), "b");
    return truths;
}

BinMassCdf rebin(const BinMassCdf& dist, const TimeGrid& grid) {
    if (grid.upper() != dist.grid().upper()) {
        throw std::invalid_argument("rebin: grids must cover the same interval");
    }
    std::vector<double> knots(grid.bins() + 1);
    for (std::size_t i = 0; i < knots.size(); ++i) knots[i] = dist.cdf_at(grid[i]);
    knots.back() = 1.0;
    return BinMassCdf::from_knot_values(grid, knots);
}

std::vector<double> cen_log_b_convergence(const PiecewiseLinearTruth& truth, std::span<const std::size_t> b_list,
                                          std::size_t n, std::uint64_t seed) {
    for (std::size_t k = 1; k < b_list.size(); ++k) {
        if (b_list[k] <= b_list[k - 1]) throw std::invalid_argument("cen_log_b_convergence: B list must increase");
    }
    const auto data = sample_dataset(truth, n, seed);
    const double upper = truth.grid().upper();
    std::vector<double> diffs;
    for (std::size_t b : b_list) {
        const TimeGrid grid = uniform_time_grid(upper, b, 0.0);
        const BinMassCdf pred = rebin(truth.event(), grid);
        double sum = 0.0;
        for (const auto& row : data.rows()) {
            const auto w = cen_log_weights(CdfRef(pred), row.obs, grid).weights;
            sum += cen_log(pred, row.obs, w) - cen_log_simple(pred, row.obs);
        }
        diffs.push_back(std::abs(sum / static_cast<double>(data.size())));
    }
    return diffs;
}

}  // namespace survscore
