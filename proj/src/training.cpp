#include "survscore/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

namespace survscore {

namespace {

constexpr std::size_t kNoRow = std::numeric_limits<std::size_t>::max();
constexpr int kMaxHalvings = 60;
constexpr double kArmijo = 1e-4;

// Rows sharing a prediction share a slot: one per group for the group table,
// one per row for the linear model.
struct Slots {
    std::vector<std::size_t> of_row;
    std::vector<std::size_t> first_row;
};

Slots make_slots(const LogitModel& model, const SurvivalDataset& data) {
    Slots s;
    s.of_row.resize(data.size());
    if (model.kind() == LogitModel::Kind::GroupTable) {
        s.first_row.assign(model.groups().size(), kNoRow);
        for (std::size_t r = 0; r < data.size(); ++r) {
            const std::size_t g = model.group_index(data[r].group);
            s.of_row[r] = g;
            if (s.first_row[g] == kNoRow) s.first_row[g] = r;
        }
        return s;
    }
    s.first_row.resize(data.size());
    for (std::size_t r = 0; r < data.size(); ++r) {
        s.of_row[r] = r;
        s.first_row[r] = r;
    }
    return s;
}

struct SlotPrediction {
    std::vector<double> p;
    std::optional<BinMassCdf> dist;
    std::optional<QuantileCurve> curve;
};

std::vector<SlotPrediction> predict_slots(const LogitModel& model, const SurvivalDataset& data, const Slots& slots,
                                          const LossSpec& spec) {
    std::vector<SlotPrediction> out(slots.first_row.size());
    std::vector<double> a(model.outputs());
    for (std::size_t s = 0; s < out.size(); ++s) {
        if (slots.first_row[s] == kNoRow) continue;
        model.logits(data[slots.first_row[s]], a);
        out[s].p = softmax_masses(a);
        if (is_quantile_rule(spec.rule())) {
            out[s].curve = quantile_curve_from_increments(spec.quantile_grid(), out[s].p, spec.z_max());
        } else {
            out[s].dist = BinMassCdf(spec.time_grid(), out[s].p);
        }
    }
    return out;
}

// Slope of rho_tau(q, y) in q; at q = y the left branch.
double pinball_slope(double q, double y, double tau) { return q > y ? 1.0 - tau : -tau; }

// Score of one row; when `grad` is non-empty and the score is finite, adds
// d score / d p (p = masses or quantile increments) into it.
double row_term(const LossSpec& spec, const SlotPrediction& pred, const CensoredObservation& obs,
                const WeightVector& w, std::span<double> grad) {
    const Rule rule = spec.rule();
    if (rule == Rule::Portnoy) {
        const QuantileCurve& curve = *pred.curve;
        const double s = portnoy_curve(curve, obs, w, spec.z_infinity());
        if (grad.empty()) return s;
        const auto levels = curve.grid().levels();
        const auto q = curve.values();
        const std::size_t b = levels.size() - 1;
        // dq_j / dp_k = z_max for k < j; accumulate suffix sums over j.
        double suffix = 0.0;
        for (std::size_t j = b - 1; j >= 1; --j) {
            const double tau = levels[j];
            double dq = pinball_slope(q[j], obs.z, tau);
            if (obs.censored()) {
                dq = w[j] * dq + (1.0 - w[j]) * pinball_slope(q[j], spec.z_infinity(), tau);
            }
            suffix += dq;
            grad[j - 1] += spec.z_max() * suffix;
        }
        return s;
    }

    const BinMassCdf& f = *pred.dist;
    const double s = score(rule, f, obs, w);
    if (grad.empty() || !std::isfinite(s)) return s;
    const auto& grid = f.grid();
    const std::size_t b = grid.bins();
    const std::size_t i = grid.bin_of(obs.z);
    switch (rule) {
        case Rule::Log:
        case Rule::CenLog:
        case Rule::CenLogSimple: {
            if (obs.event) {
                grad[i] -= 1.0 / f.mass(i);
                break;
            }
            const double wi = rule == Rule::CenLog ? w[i] : 0.0;
            if (wi > 0.0) grad[i] -= wi / f.mass(i);
            if (wi < 1.0) {
                const double tail = f.survival_at_knot(i + 1);
                for (std::size_t k = i + 1; k < b; ++k) grad[k] -= (1.0 - wi) / tail;
            }
            break;
        }
        case Rule::CenContLog: {
            if (obs.event) {
                grad[i] -= 1.0 / f.mass(i);
                break;
            }
            const double surv = f.survival_at(obs.z);
            grad[i] -= (grid[i + 1] - obs.z) / grid.width(i) / surv;
            for (std::size_t k = i + 1; k < b; ++k) grad[k] -= 1.0 / surv;
            break;
        }
        case Rule::Brier:
            for (std::size_t k = 0; k < b; ++k) grad[k] += 2.0 * (f.mass(k) - (k == i ? 1.0 : 0.0));
            break;
        case Rule::CenBrier:
            for (std::size_t k = 0; k < b; ++k) grad[k] += 2.0 * (f.mass(k) - w[k]);
            break;
        case Rule::Rps:
        case Rule::CenRps: {
            // F(zeta_t) = sum_{k < t} f_k; accumulate suffix sums over t.
            double suffix = 0.0;
            for (std::size_t t = b - 1; t >= 1; --t) {
                const double cdf = f.cdf_at_knot(t);
                double target = 0.0;
                if (obs.z <= grid[t]) target = obs.event ? 1.0 : w[t];
                suffix += 2.0 * (cdf - target);
                grad[t - 1] += suffix;
            }
            break;
        }
        case Rule::Portnoy: break;
    }
    return s;
}

const WeightVector& row_weights(std::span<const WeightVector> weights, std::size_t r) {
    static const WeightVector kNone;
    return weights.empty() ? kNone : weights[r];
}

void check_weights(const SurvivalDataset& data, const LossSpec& spec, std::span<const WeightVector> weights) {
    if (!weights.empty() && weights.size() != data.size()) {
        throw std::invalid_argument("weights: expected one vector per row (" + std::to_string(data.size()) +
                                    "), got " + std::to_string(weights.size()));
    }
    if (weights.empty() && needs_weights(spec.rule()) && data.censored_count() > 0) {
        throw std::invalid_argument(std::string(rule_name(spec.rule())) + " needs per-row weights");
    }
}

void check_model(const LogitModel& model, const LossSpec& spec) {
    if (model.outputs() != spec.outputs()) {
        throw std::invalid_argument("model has " + std::to_string(model.outputs()) + " outputs, loss expects " +
                                    std::to_string(spec.outputs()));
    }
}

// Rows that share a slot and score identically, evaluated once.
struct Term {
    std::size_t row;
    std::size_t count;
};

// Distribution-rule event scores depend on z only through its bin; anything
// else is keyed on z itself.
std::vector<Term> collapse_rows(const SurvivalDataset& data, const Slots& slots, const LossSpec& spec,
                                std::span<const WeightVector> weights) {
    using Key = std::tuple<std::size_t, bool, double, std::vector<double>>;
    std::map<Key, std::size_t> index;
    std::vector<Term> terms;
    const bool by_bin = !is_quantile_rule(spec.rule());
    for (std::size_t r = 0; r < data.size(); ++r) {
        const auto& obs = data[r].obs;
        const double pos = by_bin && obs.event ? static_cast<double>(spec.time_grid().bin_of(obs.z)) : obs.z;
        const auto w = row_weights(weights, r).values();
        Key key{slots.of_row[r], obs.event, pos, std::vector<double>(w.begin(), w.end())};
        auto [it, inserted] = index.emplace(std::move(key), terms.size());
        if (inserted) {
            terms.push_back({r, 1});
        } else {
            ++terms[it->second].count;
        }
    }
    return terms;
}

struct Evaluation {
    LossValue loss;
    std::vector<double> grad;
};

Evaluation evaluate(const LogitModel& model, const SurvivalDataset& data, const Slots& slots,
                    std::span<const Term> terms, const LossSpec& spec, std::span<const WeightVector> weights,
                    bool skip_infinite, bool want_grad) {
    const auto preds = predict_slots(model, data, slots, spec);
    const std::size_t b = model.outputs();
    Evaluation ev;
    std::vector<double> slot_grad(want_grad ? preds.size() * b : 0, 0.0);
    std::vector<double> row_grad(b);
    for (const Term& t : terms) {
        const std::size_t s = slots.of_row[t.row];
        std::span<double> g;
        if (want_grad) {
            std::fill(row_grad.begin(), row_grad.end(), 0.0);
            g = row_grad;
        }
        const double term = row_term(spec, preds[s], data[t.row].obs, row_weights(weights, t.row), g);
        const double count = static_cast<double>(t.count);
        if (std::isinf(term)) {
            ev.loss.infinite_rows += t.count;
            if (skip_infinite) continue;
        }
        ev.loss.total += count * term;
        if (want_grad) {
            for (std::size_t k = 0; k < b; ++k) slot_grad[s * b + k] += count * row_grad[k];
        }
    }
    if (!want_grad) return ev;

    ev.grad.assign(model.parameters().size(), 0.0);
    std::vector<double> grad_logits(b);
    for (std::size_t s = 0; s < preds.size(); ++s) {
        if (slots.first_row[s] == kNoRow) continue;
        softmax_backward(preds[s].p, std::span<const double>(slot_grad).subspan(s * b, b), grad_logits);
        model.accumulate_gradient(data[slots.first_row[s]], grad_logits, ev.grad);
    }
    return ev;
}

}  // namespace

LossSpec LossSpec::distribution(Rule rule, TimeGrid grid) {
    if (is_quantile_rule(rule)) {
        throw std::invalid_argument("LossSpec::distribution: portnoy needs a quantile grid");
    }
    LossSpec s;
    s.rule_ = rule;
    s.z_max_ = grid.upper();
    s.time_grid_ = std::move(grid);
    return s;
}

LossSpec LossSpec::quantile(QuantileGrid grid, double z_max, double z_infinity) {
    if (!(z_max > 0.0) || !(z_infinity > z_max)) {
        throw std::invalid_argument("LossSpec::quantile: need 0 < z_max < z_infinity");
    }
    LossSpec s;
    s.rule_ = Rule::Portnoy;
    s.quantile_grid_ = std::move(grid);
    s.z_max_ = z_max;
    s.z_infinity_ = z_infinity;
    return s;
}

std::size_t LossSpec::outputs() const noexcept {
    return time_grid_ ? time_grid_->bins() : quantile_grid_->bins();
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (!(ir.tol > 0.0)) throw std::invalid_argument("IR tolerance must be positive");
    if (ir.max_outer_iters < 1) throw std::invalid_argument("IR needs at least one outer iteration");
    if (!(policy.fallback_w >= 0.0 && policy.fallback_w <= 1.0)) {
        throw std::invalid_argument("fallback weight must lie in [0, 1]");
    }
}

WeightEstimate estimate_weights(const LogitModel& model, const SurvivalDataset& data, const LossSpec& spec,
                                const WeightPolicy& policy) {
    check_model(model, spec);
    const Slots slots = make_slots(model, data);
    const auto preds = predict_slots(model, data, slots, spec);
    WeightEstimate est;
    est.weights.reserve(data.size());
    for (std::size_t r = 0; r < data.size(); ++r) {
        const auto& pred = preds[slots.of_row[r]];
        const auto& obs = data[r].obs;
        WeightResult res;
        if (spec.rule() == Rule::Portnoy) {
            res = portnoy_level_weights(CdfRef(*pred.curve), obs, spec.quantile_grid(), policy);
        } else {
            res = distribution_rule_weights(spec.rule(), CdfRef(*pred.dist), obs, spec.time_grid());
        }
        if (res.degenerate) ++est.flagged;
        est.weights.push_back(std::move(res.weights));
    }
    return est;
}

LossValue empirical_loss(const LogitModel& model, const SurvivalDataset& data, const LossSpec& spec,
                         std::span<const WeightVector> weights, bool skip_infinite) {
    check_model(model, spec);
    check_weights(data, spec, weights);
    const Slots slots = make_slots(model, data);
    const auto terms = collapse_rows(data, slots, spec, weights);
    return evaluate(model, data, slots, terms, spec, weights, skip_infinite, false).loss;
}

std::vector<double> loss_gradient(const LogitModel& model, const SurvivalDataset& data, const LossSpec& spec,
                                  std::span<const WeightVector> weights) {
    check_model(model, spec);
    check_weights(data, spec, weights);
    const Slots slots = make_slots(model, data);
    const auto terms = collapse_rows(data, slots, spec, weights);
    return evaluate(model, data, slots, terms, spec, weights, true, true).grad;
}

FitReport sgd_fit(LogitModel& model, const SurvivalDataset& data, const LossSpec& spec,
                  std::span<const WeightVector> weights, const TrainConfig& cfg) {
    cfg.validate();
    check_model(model, spec);
    check_weights(data, spec, weights);
    const Slots slots = make_slots(model, data);
    const auto terms = collapse_rows(data, slots, spec, weights);

    FitReport report;
    auto ev = evaluate(model, data, slots, terms, spec, weights, cfg.skip_infinite, true);
    report.initial_loss = ev.loss.total;
    report.final_loss = ev.loss.total;
    report.infinite_rows = ev.loss.infinite_rows;

    auto params = model.parameters();
    std::vector<double> start(params.begin(), params.end());
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double gnorm2 = 0.0;
        for (double g : ev.grad) gnorm2 += g * g;
        if (!std::isfinite(gnorm2) || !std::isfinite(ev.loss.total)) {
            report.diverged_at = epoch;
            break;
        }
        if (gnorm2 == 0.0) break;

        std::copy(params.begin(), params.end(), start.begin());
        double step = cfg.learning_rate;
        bool accepted = false;
        for (int h = 0; h < kMaxHalvings; ++h) {
            for (std::size_t k = 0; k < params.size(); ++k) params[k] = start[k] - step * ev.grad[k];
            auto trial = evaluate(model, data, slots, terms, spec, weights, cfg.skip_infinite, true);
            if (std::isfinite(trial.loss.total) &&
                trial.loss.total <= ev.loss.total - kArmijo * step * gnorm2) {
                if (h > 0) ++report.backtracks;
                ev = std::move(trial);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            std::copy(start.begin(), start.end(), params.begin());
            break;
        }
        report.epochs_run = epoch + 1;
        report.final_loss = ev.loss.total;
        report.infinite_rows = ev.loss.infinite_rows;
    }
    return report;
}

double max_cdf_change(const LogitModel& before, const LogitModel& after, const SurvivalDataset& data,
                      const LossSpec& spec) {
    const Slots slots = make_slots(after, data);
    const auto a = predict_slots(before, data, slots, spec);
    const auto b = predict_slots(after, data, slots, spec);
    double change = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s) {
        if (slots.first_row[s] == kNoRow) continue;
        if (a[s].curve) {
            const auto qa = a[s].curve->values();
            const auto qb = b[s].curve->values();
            for (std::size_t j = 0; j < qa.size(); ++j) {
                change = std::max(change, std::abs(qa[j] - qb[j]) / spec.z_max());
            }
        } else {
            for (std::size_t i = 0; i <= a[s].dist->bins(); ++i) {
                change = std::max(change, std::abs(a[s].dist->cdf_at_knot(i) - b[s].dist->cdf_at_knot(i)));
            }
        }
    }
    return change;
}

FitReport ir_fit(LogitModel& model, const SurvivalDataset& data, const LossSpec& spec, const TrainConfig& cfg) {
    cfg.validate();
    check_model(model, spec);
    if (!accepts_censoring(spec.rule()) && data.censored_count() > 0) {
        throw std::invalid_argument(std::string(rule_name(spec.rule())) + " cannot be fitted to censored data");
    }

    FitReport report;
    const bool reweight = needs_weights(spec.rule()) && data.censored_count() > 0;
    WeightEstimate est;
    if (needs_weights(spec.rule())) est = estimate_weights(model, data, spec, cfg.policy);

    for (std::size_t it = 1; it <= cfg.ir.max_outer_iters; ++it) {
        const LogitModel before = model;
        const FitReport inner = sgd_fit(model, data, spec, est.weights, cfg);
        if (it == 1) report.initial_loss = inner.initial_loss;
        report.final_loss = inner.final_loss;
        report.epochs_run += inner.epochs_run;
        report.backtracks += inner.backtracks;
        report.infinite_rows = inner.infinite_rows;
        report.flagged_weights = est.flagged;
        report.outer_iters = it;
        report.max_cdf_change.push_back(max_cdf_change(before, model, data, spec));
        if (inner.diverged_at) {
            report.diverged_at = report.epochs_run + *inner.diverged_at;
            break;
        }
        if (!reweight || report.max_cdf_change.back() < cfg.ir.tol) {
            report.converged = true;
            break;
        }
        est = estimate_weights(model, data, spec, cfg.policy);
    }
    return report;
}

}  // namespace survscore
