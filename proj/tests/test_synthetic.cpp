#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "survscore/synthetic.hpp"

using namespace survscore;

namespace {
const TimeGrid kTwo({0.0, 1.0, 2.0});
const BinMassCdf kUniform(kTwo, {0.5, 0.5});
}  // namespace

TEST_CASE("censoring fraction of a point mass at the median") {
    const PiecewiseLinearTruth t(kUniform, {{1.0, 1.0}});
    CHECK(t.censoring_fraction() == doctest::Approx(0.5));
    const auto data = sample_dataset(t, 10000, 1);
    const double frac = static_cast<double>(data.censored_count()) / data.size();
    CHECK(std::abs(frac - 0.5) < 3.0 * std::sqrt(0.25 / 10000));
    for (const auto& r : data.rows()) {
        if (!r.obs.event) CHECK(r.obs.z == 1.0);
    }
}

TEST_CASE("no censoring and full censoring") {
    const auto none = sample_dataset(PiecewiseLinearTruth(kUniform, {{2.0, 1.0}}), 500, 2);
    CHECK(none.censored_count() == 0);
    const auto all = sample_dataset(PiecewiseLinearTruth(kUniform, {{1e-9, 1.0}}), 500, 2);
    CHECK(all.censored_count() == 500);
}

TEST_CASE("truth validation") {
    CHECK_THROWS(PiecewiseLinearTruth(kUniform, {{1.0, 0.5}}));
    CHECK_THROWS(PiecewiseLinearTruth(kUniform, {{3.0, 1.0}}));
    CHECK_THROWS(PiecewiseLinearTruth(kUniform, {{0.0, 1.0}}));
    CHECK_THROWS(PiecewiseLinearTruth(kUniform, BinMassCdf(TimeGrid({0.0, 2.0}), {1.0})));
}

TEST_CASE("sampling is deterministic and interleaves groups") {
    const auto truths = default_truths();
    const auto a = sample_dataset(truths, 100, 7);
    const auto b = sample_dataset(truths, 100, 7);
    REQUIRE(a.size() == 200);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].obs == b[i].obs);
    CHECK(a[0].group == "a");
    CHECK(a[1].group == "b");
    CHECK(a[1].features == std::vector<double>{1.0});
}

TEST_CASE("continuous censoring") {
    const PiecewiseLinearTruth t(kUniform, BinMassCdf(kTwo, {0.5, 0.5}));
    CHECK(t.censoring_fraction() == doctest::Approx(0.5));
    const auto data = sample_dataset(t, 20000, 3);
    const double frac = static_cast<double>(data.censored_count()) / data.size();
    CHECK(std::abs(frac - 0.5) < 4.0 * std::sqrt(0.25 / 20000));
    CHECK_THROWS(expected_score(t, kUniform, Rule::CenLog));
}

TEST_CASE("expected cen-log by hand") {
    const PiecewiseLinearTruth t(kUniform, {{1.0, 1.0}});
    CHECK(expected_score(t, kUniform, Rule::CenLog) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("expected log score without censoring is a cross-entropy") {
    const BinMassCdf f(TimeGrid({0.0, 1.0, 2.0, 3.0}), {0.2, 0.3, 0.5});
    const BinMassCdf g(f.grid(), {0.4, 0.4, 0.2});
    const PiecewiseLinearTruth t(f, {{3.0, 1.0}});
    const double ce = -(0.2 * std::log(0.4) + 0.3 * std::log(0.4) + 0.5 * std::log(0.2));
    CHECK(expected_score(t, g, Rule::Log) == doctest::Approx(ce));
    CHECK_THROWS(expected_score(PiecewiseLinearTruth(f, {{1.5, 1.0}}), g, Rule::Log));
    CHECK_THROWS(expected_score(t, kUniform, Rule::Log));
}

TEST_CASE("expected cen-brier agrees with Monte Carlo") {
    const PiecewiseLinearTruth t(BinMassCdf(TimeGrid({0.0, 1.0, 2.0, 3.0}), {0.3, 0.45, 0.25}),
                                 {{0.6, 0.3}, {1.7, 0.3}, {3.0, 0.4}});
    const double exact = expected_score(t, t.event(), Rule::CenBrier);
    const auto data = sample_dataset(t, 1000000, 11);
    double sum = 0.0;
    double sq = 0.0;
    for (const auto& r : data.rows()) {
        const auto w = cen_brier_weights(t.event(), r.obs, t.grid()).weights;
        const double s = cen_brier(t.event(), r.obs, w);
        sum += s;
        sq += s * s;
    }
    const double n = static_cast<double>(data.size());
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    CHECK(std::abs(mean - exact) < 3.0 * se);
}

TEST_CASE("pinball integral") {
    CHECK(pinball_integral(1.0, 0.0, 2.0, 0.5) == doctest::Approx(0.5));
    CHECK(pinball_integral(3.0, 0.0, 2.0, 0.25) == doctest::Approx(0.75 * 4.0));
    CHECK(pinball_integral(0.0, 1.0, 2.0, 0.25) == doctest::Approx(0.25 * 1.5));
}

TEST_CASE("truth quantile curve") {
    const auto q = truth_quantile_curve(kUniform, uniform_quantile_grid(4));
    CHECK(q.values()[1] == doctest::Approx(0.5));
    CHECK(q.values()[4] == 2.0);
}

TEST_CASE("truth is optimal for every censoring-aware rule") {
    const auto truths = default_truths();
    for (Rule r : {Rule::Portnoy, Rule::CenLog, Rule::CenBrier, Rule::CenRps}) {
        CAPTURE(rule_name(r));
        const auto rep = properness_check(truths[0], r, 50, 0.5, 3, 1e-10);
        CHECK(rep.violations == 0);
        REQUIRE(rep.min_gap.has_value());
        CHECK(*rep.min_gap >= -1e-10);
    }
}

TEST_CASE("corrupt weights break properness") {
    ExpectationOptions e;
    e.corrupt_weights = true;
    PropernessOptions opts{e, 0.01};
    const PiecewiseLinearTruth t(reference_event_distribution(8), censoring_atoms(CensoringPattern::Heavy,
                                                                                  uniform_time_grid(2.0, 8, 0.0)));
    const auto rep = properness_check(t, Rule::CenLog, 200, 0.5, 1, 1e-10, opts);
    CHECK(rep.violations > 0);
}

TEST_CASE("no perturbations") {
    const auto rep = properness_check(default_truths()[0], Rule::CenLog, 0, 0.5, 1, 1e-10);
    CHECK_FALSE(rep.min_gap.has_value());
    CHECK(rep.violations == 0);
}

TEST_CASE("censoring patterns keep an atom at the grid end") {
    const auto g = uniform_time_grid(2.0, 4, 0.0);
    for (auto p : {CensoringPattern::Light, CensoringPattern::Heavy, CensoringPattern::BoundaryAtom}) {
        const auto atoms = censoring_atoms(p, g);
        double total = 0.0;
        for (const auto& a : atoms) total += a.prob;
        CHECK(total == doctest::Approx(1.0));
        CHECK(atoms.back().c == g.upper());
    }
    const auto b = censoring_atoms(CensoringPattern::BoundaryAtom, g);
    CHECK(b.front().c == g[1]);
}

TEST_CASE("rebin preserves the cdf at shared knots") {
    const auto f = reference_event_distribution(8);
    const auto r = rebin(f, uniform_time_grid(2.0, 4, 0.0));
    CHECK(r.cdf_at_knot(2) == doctest::Approx(f.cdf_at_knot(4)));
}

TEST_CASE("b-convergence on uncensored data is zero") {
    const PiecewiseLinearTruth t(reference_event_distribution(8), {{2.0, 1.0}});
    const std::vector<std::size_t> bs{1, 8, 16};
    for (double d : cen_log_b_convergence(t, bs, 1000, 4)) CHECK(d == 0.0);
}
