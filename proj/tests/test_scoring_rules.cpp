#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "survscore/scoring_rules.hpp"

using namespace survscore;

namespace {

const TimeGrid kTwo({0.0, 1.0, 2.0});

BinMassCdf random_cdf(std::mt19937_64& rng, const TimeGrid& grid) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> m(grid.bins());
    for (double& x : m) x = u(rng);
    return BinMassCdf(grid, m);
}

WeightVector random_weights(std::mt19937_64& rng, std::size_t b) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(b);
    for (double& x : w) x = u(rng);
    return WeightVector(w);
}

}  // namespace

TEST_CASE("pinball") {
    CHECK(pinball(2.0, 1.0, 0.9) == doctest::Approx(0.1));
    CHECK(pinball(1.7, 1.7, 0.3) == 0.0);
    CHECK(pinball(1.0, 3.0, 0.25) == doctest::Approx(0.5));
    CHECK_THROWS_AS(pinball(1.0, 1.0, 1.5), std::domain_error);
}

TEST_CASE("portnoy") {
    const QuantileCurve curve(QuantileGrid({0.0, 0.5, 0.9, 1.0}), {0.0, 2.0, 2.5, 3.0});
    CHECK(portnoy(curve, {1.0, true}, {0.5, 10.0, 0.3}) == doctest::Approx(0.5));
    CHECK(portnoy(curve, {1.0, false}, {0.5, 10.0, 0.5}) == doctest::Approx(2.25));
    CHECK(portnoy(curve, {1.0, false}, {0.9, 10.0, 1.0}) == pinball(2.5, 1.0, 0.9));
    CHECK_THROWS_AS(portnoy(curve, {1.0, false}, {0.5, 3.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(portnoy(curve, {1.0, false}, {0.5, 10.0, 1.5}), std::invalid_argument);
}

TEST_CASE("portnoy curve sums interior levels") {
    const QuantileCurve curve(QuantileGrid({0.0, 0.5, 0.9, 1.0}), {0.0, 2.0, 2.5, 3.0});
    const CensoredObservation obs{1.0, true};
    CHECK(portnoy_curve(curve, obs, {}, 10.0) == doctest::Approx(pinball(2.0, 1.0, 0.5) + pinball(2.5, 1.0, 0.9)));
}

TEST_CASE("log score") {
    CHECK(log_score(BinMassCdf(kTwo, {0.5, 0.5}), 0.5) == doctest::Approx(0.693147180559945));
    CHECK(log_score(BinMassCdf(kTwo, {0.25, 0.75}), 1.5) == doctest::Approx(0.287682072451781));
    CHECK(log_score(BinMassCdf(kTwo, {0.0, 1.0}), 1.5) < 1e-11);
    CHECK_THROWS_AS(log_score(BinMassCdf(kTwo, {0.5, 0.5}), 2.5), std::domain_error);
}

TEST_CASE("cen-log") {
    const BinMassCdf f(kTwo, {0.25, 0.75});
    CHECK(cen_log(f, {0.5, false}, WeightVector({0.0, 0.0})) == doctest::Approx(0.287682072451781));
    CHECK(cen_log(f, {0.5, false}, WeightVector({1.0, 0.0})) == doctest::Approx(1.386294361119891));
    CHECK(cen_log(f, {1.5, true}, {}) == log_score(f, 1.5));
    CHECK_THROWS_AS(cen_log(f, {0.5, false}, WeightVector({0.0})), std::invalid_argument);
}

TEST_CASE("cen-log in the last bin with zero weight is infinite") {
    const BinMassCdf f(kTwo, {0.25, 0.75});
    CHECK(std::isinf(cen_log_simple(f, {1.5, false})));
    CHECK(cen_log(f, {1.5, false}, WeightVector({0.0, 1.0})) == doctest::Approx(-std::log(0.75)));
}

TEST_CASE("cen-log-simple") {
    const BinMassCdf f(kTwo, {0.25, 0.75});
    CHECK(cen_log_simple(f, {0.5, false}) == doctest::Approx(0.287682072451781));
    CHECK(cen_log_simple(f, {1.5, true}) == log_score(f, 1.5));
    std::mt19937_64 rng(11);
    const TimeGrid g({0.0, 0.3, 1.0, 1.4, 2.5});
    std::uniform_real_distribution<double> z(0.01, 2.3);
    for (int k = 0; k < 200; ++k) {
        const auto p = random_cdf(rng, g);
        const CensoredObservation obs{z(rng), k % 2 == 0};
        CHECK(cen_log_simple(p, obs) == cen_log(p, obs, WeightVector::zeros(4)));
    }
}

TEST_CASE("cen-cont-log") {
    const BinMassCdf f(TimeGrid({0.0, 2.0}), {1.0});
    CHECK(cen_cont_log(f, {1.0, true}) == doctest::Approx(0.693147180559945));
    CHECK(cen_cont_log(f, {1.0, false}) == doctest::Approx(0.693147180559945));
    const BinMassCdf g(TimeGrid({0.0, 1.0, 2.0, 3.0}), {0.2, 0.5, 0.3});
    CHECK(cen_cont_log(g, {1.5, true}) == doctest::Approx(cen_log_simple(g, {1.5, true})));
}

TEST_CASE("brier") {
    CHECK(brier(BinMassCdf(kTwo, {0.5, 0.5}), 0.5) == doctest::Approx(0.5));
    CHECK(brier(BinMassCdf(kTwo, {0.25, 0.75}), 1.5) == doctest::Approx(0.125));
    CHECK(brier(BinMassCdf(kTwo, {1.0, 0.0}), 0.5) < 1e-20);
}

TEST_CASE("cen-brier") {
    const BinMassCdf f(kTwo, {0.5, 0.5});
    CHECK(cen_brier(f, {0.5, false}, WeightVector({0.0, 1.0})) == doctest::Approx(0.5));
    CHECK(cen_brier(f, {0.5, false}, WeightVector({1.0 / 3, 2.0 / 3})) == doctest::Approx(0.5));
    const BinMassCdf g(kTwo, {0.25, 0.75});
    CHECK(cen_brier(g, {1.5, true}, WeightVector({0.0, 1.0})) == brier(g, 1.5));
}

TEST_CASE("cen binary brier") {
    const BinMassCdf f = BinMassCdf::from_knot_values(TimeGrid({0.0, 0.8, 2.0}), std::vector<double>{0.0, 0.7, 1.0});
    CHECK(cen_binary_brier(f, {0.5, false}, 0.8, 0.6) == doctest::Approx(0.25));
    CHECK(cen_binary_brier(f, {0.5, true}, 0.8, 0.6) == doctest::Approx(0.09));
    CHECK(cen_binary_brier(f, {1.0, true}, 0.8, 0.6) == doctest::Approx(0.49));
    CHECK_THROWS_AS(cen_binary_brier(f, {0.5, true}, 2.0, 0.6), std::domain_error);
}

TEST_CASE("rps") {
    CHECK(rps(BinMassCdf(kTwo, {0.5, 0.5}), 0.5) == doctest::Approx(0.25));
    CHECK(rps(BinMassCdf(kTwo, {0.25, 0.75}), 1.5) == doctest::Approx(0.0625));
    CHECK(rps(BinMassCdf(kTwo, {1.0, 0.0}), 0.5) < 1e-20);
}

TEST_CASE("cen-rps") {
    const BinMassCdf f(kTwo, {0.25, 0.75});
    CHECK(cen_rps(f, {0.5, false}, WeightVector({0.0, 1.0 / 3})) == doctest::Approx(0.2291666666666667));
    CHECK(cen_rps(f, {0.5, false}, WeightVector({0.0, 1.0 / 3})) ==
          cen_binary_brier(f, {0.5, false}, 1.0, 1.0 / 3));
    CHECK(cen_rps(f, {1.5, true}, WeightVector({0.3, 0.9})) == rps(f, 1.5));
    CHECK(cen_rps(BinMassCdf(TimeGrid({0.0, 1.0}), {1.0}), {0.5, false}, WeightVector({0.0})) == 0.0);
}

TEST_CASE("cen-rps is the sum of binary scores") {
    std::mt19937_64 rng(5);
    const TimeGrid g({0.0, 0.5, 1.0, 1.5, 2.0, 3.0});
    std::uniform_real_distribution<double> z(0.01, 3.0);
    for (int k = 0; k < 300; ++k) {
        const auto p = random_cdf(rng, g);
        const auto w = random_weights(rng, g.bins());
        const CensoredObservation obs{z(rng), k % 3 == 0};
        double sum = 0.0;
        for (std::size_t i = 1; i < g.bins(); ++i) sum += cen_binary_brier(p, obs, g[i], obs.event ? 0.0 : w[i]);
        CHECK(cen_rps(p, obs, w) == sum);
    }
}

TEST_CASE("scores are finite for interior observations") {
    std::mt19937_64 rng(8);
    const TimeGrid g({0.0, 0.5, 1.0, 2.0});
    for (int k = 0; k < 100; ++k) {
        const auto p = random_cdf(rng, g);
        const auto w = random_weights(rng, 3);
        for (Rule r : {Rule::CenLog, Rule::CenContLog, Rule::CenBrier, Rule::CenRps}) {
            CHECK(std::isfinite(score(r, p, {0.7, false}, w)));
            CHECK(std::isfinite(score(r, p, {1.7, true}, w)));
        }
    }
}

TEST_CASE("rule names and dispatch") {
    for (Rule r : kAllRules) CHECK(parse_rule(rule_name(r)) == r);
    CHECK_THROWS_AS(parse_rule("crps"), std::invalid_argument);
    const BinMassCdf f(kTwo, {0.25, 0.75});
    CHECK_THROWS_AS(score(Rule::Log, f, {0.5, false}), std::invalid_argument);
    CHECK_THROWS_AS(score(Rule::Portnoy, f, {0.5, true}), std::invalid_argument);
    CHECK(score(Rule::Brier, f, {1.5, true}) == brier(f, 1.5));
}

TEST_CASE("weight vectors stay in [0, 1]") {
    CHECK_THROWS_AS(WeightVector({0.5, 1.2}), std::invalid_argument);
    CHECK_THROWS_AS(WeightVector({-0.1}), std::invalid_argument);
    CHECK(WeightVector({0.25, 0.5}).sum() == 0.75);
}
