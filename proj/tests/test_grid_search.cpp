#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "survscore/grid_search.hpp"
#include "survscore/synthetic.hpp"

using namespace survscore;

TEST_CASE("weighted minimizer is an empirical quantile") {
    const std::vector<double> z{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> w(4, 1.0);
    const double q = weighted_portnoy_minimizer(z, w, 10.0, 0.6, 0.0, 5.0);
    CHECK(q == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("uncensored fit matches empirical quantiles") {
    const PiecewiseLinearTruth t(reference_event_distribution(8), {{2.0, 1.0}}, "a");
    const auto data = sample_dataset(t, 2000, 5);
    const auto grid = uniform_quantile_grid(4);
    const auto fit = grid_search_fit_quantiles(data, grid);
    REQUIRE(fit.curves.size() == 1);
    std::vector<double> z;
    for (const auto& r : data.rows()) z.push_back(r.obs.z);
    std::sort(z.begin(), z.end());
    for (std::size_t j = 1; j < 4; ++j) {
        const double tau = grid[j];
        const auto k = static_cast<std::size_t>(std::ceil(tau * z.size())) - 1;
        const double gap = std::max(z[k + 1] - z[k], z[k] - z[k - 1]);
        CHECK(std::abs(fit.curves[0].values()[j] - z[k]) <= gap + 1e-9);
    }
}

TEST_CASE("single level grid") {
    const SurvivalDataset data({{"a", {}, {0.5, true}}, {"a", {}, {1.5, false}}}, 2.0);
    const auto fit = grid_search_fit_quantiles(data, uniform_quantile_grid(1));
    REQUIRE(fit.curves[0].values().size() == 2);
    CHECK(fit.curves[0].values()[0] == 0.0);
    CHECK(fit.curves[0].values()[1] == 2.0);
}

TEST_CASE("heavily censored data still gives a monotone curve") {
    std::vector<SurvivalRow> rows;
    for (int k = 0; k < 20; ++k) rows.push_back({"a", {}, {0.3, false}});
    rows.push_back({"a", {}, {1.0, true}});
    const SurvivalDataset data(std::move(rows), 2.0);
    const auto fit = grid_search_fit_quantiles(data, uniform_quantile_grid(8));
    const auto v = fit.curves[0].values();
    for (std::size_t j = 1; j < v.size(); ++j) CHECK(v[j] > v[j - 1]);
}

TEST_CASE("groups are fitted separately and unknown groups fail") {
    const auto truths = default_truths();
    const auto data = sample_dataset(truths, 500, 3);
    const auto fit = grid_search_fit_quantiles(data, uniform_quantile_grid(4), {}, {}, {"b", "a"});
    CHECK(fit.groups == std::vector<std::string>{"b", "a"});
    CHECK(fit.curves[0].values()[2] < fit.curves[1].values()[2]);
    CHECK_THROWS(grid_search_fit_quantiles(data, uniform_quantile_grid(4), {}, {}, {"zzz"}));
}

TEST_CASE("monotone repair") {
    std::vector<double> v{0.0, 1.0, 0.5, 2.0, 3.0};
    const auto n = repair_monotone(v, 3.0);
    CHECK(n == 2);
    for (std::size_t j = 1; j < v.size(); ++j) CHECK(v[j] > v[j - 1]);
    CHECK(v[1] == doctest::Approx(0.75).epsilon(1e-6));
    std::vector<double> ok{0.0, 1.0, 2.0, 3.0};
    CHECK(repair_monotone(ok, 3.0) == 0);
}
