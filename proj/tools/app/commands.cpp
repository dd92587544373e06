#include "app/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "CLI11.hpp"
#include "app/csv.hpp"
#include "app/truth_spec.hpp"
#include "survscore/grid_search.hpp"
#include "survscore/kaplan_meier.hpp"
#include "survscore/metrics.hpp"
#include "survscore/synthetic.hpp"
#include "survscore/training.hpp"

#ifndef SURVSCORE_VERSION
#define SURVSCORE_VERSION "0.0.0"
#endif

namespace survscore::app {

using nlohmann::json;

namespace {

constexpr std::size_t kDefaultTrainBins = 32;
constexpr std::size_t kDefaultPropernessBins = 8;

json num(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double to_num(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw std::invalid_argument("report: '" + s + "' is not a number");
}

json num_array(std::span<const double> xs) {
    json a = json::array();
    for (double x : xs) a.push_back(num(x));
    return a;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

Rule rule_from(const std::string& name) {
    try {
        return parse_rule(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

RunReport start_report(const RunConfig& cfg) {
    RunReport r;
    r.command = cfg.command;
    r.version = tool_version();
    r.seed = cfg.seed;
    r.config = cfg.to_json();
    return r;
}

MetricsBlock metrics_block(const std::vector<BinMassCdf>& preds, const SurvivalDataset& data) {
    const auto obs = data.observations();
    const auto rep = evaluate_predictions(preds, obs);
    return {rep.mean_cen_log_simple, rep.d_calibration, rep.km_calibration, rep.flagged_count};
}

TrainConfig train_config(const RunConfig& cfg) {
    if (!(cfg.lr > 0.0)) throw UsageError("--lr must be positive");
    if (cfg.epochs < 1) throw UsageError("--epochs must be at least 1");
    if (cfg.ir_max_iters < 1) throw UsageError("--ir-max-iters must be at least 1");
    if (!(cfg.ir_tol > 0.0)) throw UsageError("--ir-tol must be positive");
    if (!(cfg.fallback_w >= 0.0 && cfg.fallback_w <= 1.0)) throw UsageError("--fallback-w must lie in [0, 1]");
    if (!(cfg.z_inf_factor > 1.0)) throw UsageError("--z-inf-factor must exceed 1");
    TrainConfig t;
    t.learning_rate = cfg.lr;
    t.epochs = cfg.epochs;
    t.seed = cfg.seed;
    t.ir.max_outer_iters = cfg.ir_max_iters;
    t.ir.tol = cfg.ir_tol;
    t.policy.fallback_w = cfg.fallback_w;
    return t;
}

// Truth re-expressed on a training grid, for the oracle's expected score.
PiecewiseLinearTruth truth_on_grid(const PiecewiseLinearTruth& truth, const TimeGrid& grid) {
    std::vector<double> knots(grid.bins() + 1);
    const double upper = truth.grid().upper();
    for (std::size_t i = 0; i < knots.size(); ++i) {
        knots[i] = grid[i] >= upper ? 1.0 : truth.event().cdf_at(grid[i]);
    }
    knots.back() = 1.0;
    std::vector<CensorAtom> atoms;
    // Nobody outlives the truth's upper end, so atoms there censor no one.
    for (const auto& a : truth.atoms()) atoms.push_back({a.c >= upper ? grid.upper() : std::min(a.c, grid.upper()), a.prob});
    return PiecewiseLinearTruth(BinMassCdf::from_knot_values(grid, knots), std::move(atoms), truth.group());
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    return idx;
}

}  // namespace

std::string tool_version() { return SURVSCORE_VERSION; }

json RunConfig::to_json() const {
    json j;
    j["command"] = command;
    j["input"] = input;
    j["predictions"] = predictions;
    j["truth"] = truth;
    j["out"] = out;
    j["predictions_out"] = predictions_out;
    j["test_out"] = test_out;
    j["rule"] = rule;
    j["method"] = method;
    j["group_col"] = group_col;
    j["bins"] = bins ? json(*bins) : json(nullptr);
    j["seed"] = seed;
    j["lr"] = num(lr);
    j["epochs"] = epochs;
    j["ir_max_iters"] = ir_max_iters;
    j["ir_tol"] = num(ir_tol);
    j["fallback_w"] = num(fallback_w);
    j["z_inf_factor"] = num(z_inf_factor);
    j["grid_max"] = grid_max ? num(*grid_max) : json(nullptr);
    j["n"] = n;
    j["perturbations"] = perturbations;
    j["scale"] = num(scale);
    j["tolerance"] = num(tolerance);
    j["corrupt_weights"] = corrupt_weights;
    return j;
}

json report_to_json(const RunReport& r) {
    json j;
    j["command"] = r.command;
    j["version"] = r.version;
    j["seed"] = r.seed;
    j["config"] = r.config;
    if (r.metrics) {
        j["metrics"] = {{"mean_cen_log_simple", num(r.metrics->mean_cen_log_simple)},
                        {"d_calibration", num(r.metrics->d_calibration)},
                        {"km_calibration", num(r.metrics->km_calibration)},
                        {"flagged", r.metrics->flagged}};
    }
    if (r.fit) {
        j["fit"] = {{"outer_iters", r.fit->outer_iters},
                    {"converged", r.fit->converged},
                    {"final_loss", num(r.fit->final_loss)},
                    {"flagged", r.fit->flagged},
                    {"epochs_run", r.fit->epochs_run},
                    {"max_cdf_change", num_array(r.fit->max_cdf_change)},
                    {"diverged_at", r.fit->diverged_at ? json(*r.fit->diverged_at) : json(nullptr)}};
    }
    j["details"] = r.details;
    j["wall_clock_seconds"] = num(r.wall_clock_seconds);
    j["exit_code"] = r.exit_code;
    return j;
}

RunReport report_from_json(const json& j) {
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = j.at("config");
    if (j.contains("metrics")) {
        const auto& m = j.at("metrics");
        r.metrics = MetricsBlock{to_num(m.at("mean_cen_log_simple")), to_num(m.at("d_calibration")),
                                 to_num(m.at("km_calibration")), m.at("flagged").get<std::size_t>()};
    }
    if (j.contains("fit")) {
        const auto& f = j.at("fit");
        FitBlock fit;
        fit.outer_iters = f.at("outer_iters").get<std::size_t>();
        fit.converged = f.at("converged").get<bool>();
        fit.final_loss = to_num(f.at("final_loss"));
        fit.flagged = f.at("flagged").get<std::size_t>();
        fit.epochs_run = f.at("epochs_run").get<std::size_t>();
        for (const auto& c : f.at("max_cdf_change")) fit.max_cdf_change.push_back(to_num(c));
        if (!f.at("diverged_at").is_null()) fit.diverged_at = f.at("diverged_at").get<std::size_t>();
        r.fit = std::move(fit);
    }
    r.details = j.at("details");
    r.wall_clock_seconds = to_num(j.at("wall_clock_seconds"));
    r.exit_code = j.at("exit_code").get<int>();
    return r;
}

std::string serialize_report(const RunReport& report) { return report_to_json(report).dump(2) + "\n"; }

RunReport run_simulate(const RunConfig& cfg) {
    if (cfg.out.empty()) throw UsageError("simulate: --out <dataset.csv> is required");
    if (cfg.n < 1) throw UsageError("simulate: --n must be at least 1");
    const auto truths = cfg.truth.empty() ? default_truths() : load_truths(cfg.truth);
    const auto data = sample_dataset(truths, cfg.n, cfg.seed);
    write_dataset_csv(cfg.out, data);
    const std::string sidecar = cfg.out + ".truth.json";
    save_truths(sidecar, truths);

    RunReport r = start_report(cfg);
    double analytic = 0.0;
    json groups = json::array();
    for (const auto& t : truths) {
        analytic += t.censoring_fraction() / static_cast<double>(truths.size());
        groups.push_back({{"name", t.group()}, {"censoring_fraction", num(t.censoring_fraction())}});
    }
    r.details = {{"rows", data.size()},
                 {"censored", data.censored_count()},
                 {"censoring_fraction", num(static_cast<double>(data.censored_count()) /
                                            static_cast<double>(data.size()))},
                 {"analytic_censoring_fraction", num(analytic)},
                 {"groups", groups},
                 {"truth_file", sidecar}};
    return r;
}

RunReport run_train(const RunConfig& cfg) {
    if (cfg.input.empty()) throw UsageError("train: --input is required");
    const std::size_t b = cfg.bins.value_or(kDefaultTrainBins);
    if (b < 2) throw UsageError("train: evaluation metrics need B >= 2 bins");
    const Rule rule = rule_from(cfg.rule);
    const TrainConfig tcfg = train_config(cfg);
    if (cfg.method != "ir" && cfg.method != "grid-search") {
        throw UsageError("train: --method must be 'ir' or 'grid-search'");
    }

    const auto loaded = load_csv(cfg.input, CsvOptions{cfg.group_col});
    const SurvivalDataset& data = loaded.data;
    const bool grouped = !loaded.group_column.empty();
    if (cfg.method == "grid-search" && (rule != Rule::Portnoy || !grouped)) {
        throw UsageError("train: grid search fits portnoy on grouped data only");
    }

    const auto idx = shuffled_indices(data.size(), cfg.seed);
    const std::size_t n_train = data.size() * 6 / 10;
    const std::size_t n_val = data.size() * 2 / 10;
    if (n_train == 0 || n_train + n_val >= data.size()) throw UsageError("train: too few rows to split 60/20/20");
    const auto train = data.subset({idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train)});
    const auto test =
        data.subset({idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), idx.end()});

    const TimeGrid grid = uniform_time_grid(data.z_max(), b);
    const QuantileGrid qgrid = uniform_quantile_grid(b);
    const double z_inf = cfg.z_inf_factor * grid.upper();

    RunReport r = start_report(cfg);
    std::vector<BinMassCdf> preds;
    preds.reserve(test.size());
    FitBlock fit;
    if (cfg.method == "grid-search") {
        const auto gs = grid_search_fit_quantiles(train, qgrid, tcfg.policy, GridSearchConfig{cfg.z_inf_factor});
        for (const auto& row : test.rows()) {
            auto it = std::find(gs.groups.begin(), gs.groups.end(), row.group);
            if (it == gs.groups.end()) throw UsageError("train: test group '" + row.group + "' absent from training");
            preds.push_back(gs.curves[static_cast<std::size_t>(it - gs.groups.begin())].to_bin_masses(grid));
        }
        fit.outer_iters = 1;
        fit.converged = true;
        double loss = 0.0;
        for (const auto& row : train.rows()) {
            const auto& curve =
                gs.curves[static_cast<std::size_t>(std::find(gs.groups.begin(), gs.groups.end(), row.group) -
                                                   gs.groups.begin())];
            const auto w = portnoy_level_weights(CdfRef(curve), row.obs, qgrid, tcfg.policy).weights;
            loss += portnoy_curve(curve, row.obs, w, cfg.z_inf_factor * train.z_max());
        }
        fit.final_loss = loss;
        r.details["repairs"] = gs.repairs;
    } else {
        LogitModel model = grouped ? LogitModel::group_table(data.groups(), b) : LogitModel::linear_for(train, b);
        const LossSpec spec = is_quantile_rule(rule) ? LossSpec::quantile(qgrid, grid.upper(), z_inf)
                                                     : LossSpec::distribution(rule, grid);
        const FitReport rep = ir_fit(model, train, spec, tcfg);
        for (const auto& row : test.rows()) {
            preds.push_back(is_quantile_rule(rule)
                                ? model.predict_quantiles(row, qgrid, grid.upper()).to_bin_masses(grid)
                                : model.predict_distribution(row, grid));
        }
        fit.outer_iters = rep.outer_iters;
        fit.converged = rep.converged;
        fit.final_loss = rep.final_loss;
        fit.flagged = rep.flagged_weights;
        fit.epochs_run = rep.epochs_run;
        fit.max_cdf_change = rep.max_cdf_change;
        fit.diverged_at = rep.diverged_at;
        r.details["initial_loss"] = num(rep.initial_loss);
        r.details["infinite_rows"] = rep.infinite_rows;
    }
    r.fit = fit;
    r.metrics = metrics_block(preds, test);
    r.details["split"] = {{"train", train.size()}, {"validation", n_val}, {"test", test.size()}};
    r.details["grid_upper"] = num(grid.upper());
    r.details["model"] = grouped ? "group-table" : "linear";

    if (!cfg.truth.empty()) {
        const auto truths = load_truths(cfg.truth);
        double expected = 0.0;
        double covered = 0.0;
        for (const auto& t : truths) {
            const auto count = static_cast<double>(std::count_if(
                test.rows().begin(), test.rows().end(), [&](const SurvivalRow& row) { return row.group == t.group(); }));
            if (count == 0.0) continue;
            const auto on_grid = truth_on_grid(t, grid);
            expected += count * expected_score(on_grid, on_grid.event(), Rule::CenLogSimple);
            covered += count;
        }
        if (covered > 0.0) r.details["oracle"] = {{"expected_mean_cen_log_simple", num(expected / covered)}};
    }

    if (!cfg.predictions_out.empty()) {
        std::vector<std::vector<double>> masses;
        for (const auto& p : preds) masses.emplace_back(p.masses().begin(), p.masses().end());
        write_predictions_csv(cfg.predictions_out, masses);
    }
    if (!cfg.test_out.empty()) write_dataset_csv(cfg.test_out, test, grouped);
    return r;
}

RunReport run_eval(const RunConfig& cfg) {
    if (cfg.input.empty() || cfg.predictions.empty()) {
        throw UsageError("eval: --input and --predictions are required");
    }
    const auto loaded = load_csv(cfg.input, CsvOptions{cfg.group_col});
    const auto masses = load_predictions(cfg.predictions);
    if (masses.size() != loaded.data.size()) {
        throw ParseError(cfg.predictions, 0,
                         std::to_string(masses.size()) + " prediction rows for " +
                             std::to_string(loaded.data.size()) + " observations");
    }
    const std::size_t b = masses.front().size();
    if (cfg.bins && *cfg.bins != b) {
        throw UsageError("eval: --bins " + std::to_string(*cfg.bins) + " but predictions have " +
                         std::to_string(b) + " columns");
    }
    const TimeGrid grid = cfg.grid_max ? uniform_time_grid(*cfg.grid_max, b, 0.0)
                                       : uniform_time_grid(loaded.data.z_max(), b);
    if (loaded.data.z_max() > grid.upper()) throw UsageError("eval: observations exceed --grid-max");
    std::vector<BinMassCdf> preds;
    preds.reserve(masses.size());
    for (const auto& m : masses) preds.emplace_back(grid, m);

    RunReport r = start_report(cfg);
    r.metrics = metrics_block(preds, loaded.data);
    r.details = {{"bins", b}, {"grid_upper", num(grid.upper())}, {"rows", loaded.data.size()}};
    return r;
}

RunReport run_properness(const RunConfig& cfg) {
    if (!(cfg.scale > 0.0)) throw UsageError("properness: --scale must be positive");
    if (!(cfg.tolerance >= 0.0)) throw UsageError("properness: --tolerance must be nonnegative");
    if (!(cfg.z_inf_factor > 1.0)) throw UsageError("properness: --z-inf-factor must exceed 1");
    if (!(cfg.fallback_w >= 0.0 && cfg.fallback_w <= 1.0)) {
        throw UsageError("properness: --fallback-w must lie in [0, 1]");
    }
    std::vector<Rule> rules;
    if (cfg.rule.empty() || cfg.rule == "all") {
        rules = {Rule::Portnoy, Rule::CenLog, Rule::CenBrier, Rule::CenRps};
    } else {
        rules = {rule_from(cfg.rule)};
    }

    std::vector<std::pair<std::string, PiecewiseLinearTruth>> truths;
    if (!cfg.truth.empty()) {
        for (auto& t : load_truths(cfg.truth)) truths.emplace_back("group:" + t.group(), std::move(t));
    } else {
        const std::size_t b = cfg.bins.value_or(kDefaultPropernessBins);
        if (b < 1) throw UsageError("properness: --bins must be at least 1");
        const auto event = reference_event_distribution(b);
        for (auto p : {CensoringPattern::Light, CensoringPattern::Heavy, CensoringPattern::BoundaryAtom}) {
            truths.emplace_back(std::string(censoring_pattern_name(p)),
                                PiecewiseLinearTruth(event, censoring_atoms(p, event.grid())));
        }
    }

    PropernessOptions opts;
    opts.expectation.z_infinity_factor = cfg.z_inf_factor;
    opts.expectation.policy.fallback_w = cfg.fallback_w;
    opts.expectation.corrupt_weights = cfg.corrupt_weights;

    RunReport r = start_report(cfg);
    json runs = json::array();
    std::size_t total = 0;
    std::uint64_t k = 0;
    for (Rule rule : rules) {
        for (const auto& [name, truth] : truths) {
            PropernessReport rep;
            try {
                rep = properness_check(truth, rule, cfg.perturbations, cfg.scale, cfg.seed + 7919 * k++,
                                       cfg.tolerance, opts);
            } catch (const std::invalid_argument& e) {
                throw UsageError(std::string("properness: ") + e.what());
            }
            total += rep.violations;
            runs.push_back({{"rule", std::string(rule_name(rule))},
                            {"truth", name},
                            {"bins", rep.bins},
                            {"n_perturbations", rep.n_perturbations},
                            {"min_gap", rep.min_gap ? num(*rep.min_gap) : json(nullptr)},
                            {"violations", rep.violations},
                            {"distinct_candidates", rep.distinct_candidates},
                            {"min_distinct_gap", rep.min_distinct_gap ? num(*rep.min_distinct_gap) : json(nullptr)}});
        }
    }
    r.details = {{"runs", runs}, {"total_violations", total}};
    r.exit_code = total > 0 ? kExitValidation : kExitOk;
    return r;
}

RunReport run_km(const RunConfig& cfg) {
    if (cfg.input.empty()) throw UsageError("km: --input is required");
    const std::size_t b = cfg.bins.value_or(kDefaultTrainBins);
    if (b < 1) throw UsageError("km: --bins must be at least 1");
    const auto loaded = load_csv(cfg.input, CsvOptions{cfg.group_col});
    const auto km = kaplan_meier(loaded.data);
    const TimeGrid grid = uniform_time_grid(loaded.data.z_max(), b);
    const auto masses = km.bin_masses(grid);

    RunReport r = start_report(cfg);
    r.details = {{"event_times", num_array(km.event_times())},
                 {"survival", num_array(km.survival())},
                 {"grid", num_array(grid.thresholds())},
                 {"bin_masses", num_array(masses)}};
    return r;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Censored proper scoring rules for survival analysis"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::size_t bins = 0;

    auto bins_opt = [&](CLI::App* sub) { return sub->add_option("--bins", bins, "Number of bins B"); };
    auto train_opts = [&](CLI::App* sub) {
        sub->add_option("--lr", cfg.lr, "Learning rate");
        sub->add_option("--epochs", cfg.epochs, "Gradient steps per fit");
        sub->add_option("--ir-max-iters", cfg.ir_max_iters, "Iterative reweighting rounds");
        sub->add_option("--ir-tol", cfg.ir_tol, "Stop once no CDF knot moves more than this");
    };

    auto* sim = app.add_subcommand("simulate", "Sample a synthetic dataset from a truth file");
    sim->add_option("--truth", cfg.truth, "Truth JSON (default: built-in two-group truth)");
    sim->add_option("--n", cfg.n, "Rows per group");
    sim->add_option("--seed", cfg.seed);
    sim->add_option("--out", cfg.out, "Dataset CSV to write")->required();
    sim->add_option("--report", cfg.report, "Report JSON (default: stdout)");

    auto* train = app.add_subcommand("train", "Fit a model and report test metrics");
    train->add_option("--input,-i", cfg.input, "Dataset CSV")->required();
    train->add_option("--rule", cfg.rule, "Scoring rule");
    auto* train_bins = bins_opt(train);
    train->add_option("--seed", cfg.seed);
    train_opts(train);
    train->add_option("--fallback-w", cfg.fallback_w, "Portnoy weight when F(c) > tau");
    train->add_option("--z-inf-factor", cfg.z_inf_factor, "z_infinity / z_max");
    train->add_option("--group-col", cfg.group_col, "Group column for the group-table model");
    train->add_option("--method", cfg.method, "ir or grid-search");
    train->add_option("--truth", cfg.truth, "Truth JSON, for the oracle optimum");
    train->add_option("--predictions-out", cfg.predictions_out, "Write test-row predictions here");
    train->add_option("--test-out", cfg.test_out, "Write the test rows here");
    train->add_option("--out", cfg.out, "Report JSON (default: stdout)");

    auto* eval = app.add_subcommand("eval", "Score stored predictions against observations");
    eval->add_option("--input,-i", cfg.input, "Observation CSV")->required();
    eval->add_option("--predictions", cfg.predictions, "Predictions CSV with columns f_0..f_{B-1}")->required();
    auto* eval_bins = bins_opt(eval);
    eval->add_option("--grid-max", cfg.grid_max, "Upper end of the time grid (default: max time + 1e-3)");
    eval->add_option("--group-col", cfg.group_col);
    eval->add_option("--out", cfg.out, "Report JSON (default: stdout)");

    auto* prop = app.add_subcommand("properness", "Exact-expectation properness sweep");
    prop->add_option("--rule", cfg.rule, "Rule, or 'all' for the four censored rules")->default_str("all");
    auto* prop_bins = bins_opt(prop);
    prop->add_option("--seed", cfg.seed);
    prop->add_option("--perturbations", cfg.perturbations, "Candidates per rule and truth");
    prop->add_option("--scale", cfg.scale, "Standard deviation of the logit noise");
    prop->add_option("--tolerance", cfg.tolerance, "Gaps below -tolerance are violations");
    prop->add_flag("--corrupt-weights", cfg.corrupt_weights, "Negative control: treat censored times as events");
    prop->add_option("--fallback-w", cfg.fallback_w);
    prop->add_option("--z-inf-factor", cfg.z_inf_factor);
    prop->add_option("--truth", cfg.truth, "Truth JSON (default: three censoring patterns)");
    prop->add_option("--out", cfg.out, "Report JSON (default: stdout)");

    auto* km = app.add_subcommand("km", "Kaplan-Meier curve and its bin masses");
    km->add_option("--input,-i", cfg.input, "Dataset CSV")->required();
    auto* km_bins = bins_opt(km);
    km->add_option("--group-col", cfg.group_col);
    km->add_option("--out", cfg.out, "Report JSON (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    for (auto* opt : {train_bins, eval_bins, prop_bins, km_bins}) {
        if (opt->count() > 0) cfg.bins = bins;
    }
    if (prop->parsed() && prop->get_option("--rule")->count() == 0) cfg.rule = "all";

    const auto t0 = std::chrono::steady_clock::now();
    try {
        RunReport report;
        if (sim->parsed()) {
            cfg.command = "simulate";
            report = run_simulate(cfg);
        } else if (train->parsed()) {
            cfg.command = "train";
            report = run_train(cfg);
        } else if (eval->parsed()) {
            cfg.command = "eval";
            report = run_eval(cfg);
        } else if (prop->parsed()) {
            cfg.command = "properness";
            report = run_properness(cfg);
        } else {
            cfg.command = "km";
            report = run_km(cfg);
        }
        report.wall_clock_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::string text = serialize_report(report);
        const std::string& path = cfg.command == "simulate" ? cfg.report : cfg.out;
        if (path.empty()) {
            out << text;
        } else {
            write_text(path, text);
        }
        return report.exit_code;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitIo;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace survscore::app
