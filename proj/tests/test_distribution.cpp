#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "survscore/distribution.hpp"

using namespace survscore;

namespace {
const TimeGrid kTwo({0.0, 1.0, 2.0});
}

TEST_CASE("cdf interpolates linearly inside bins") {
    const BinMassCdf f(kTwo, {0.25, 0.75});
    CHECK(f.cdf_at(1.5) == doctest::Approx(0.625));
    CHECK(f.cdf_at(0.0) == 0.0);
    CHECK(f.cdf_at(1.0) == doctest::Approx(0.25));
    CHECK(f.cdf_at(2.0) == 1.0);
    CHECK(f.survival_at(1.5) == doctest::Approx(0.375));
}

TEST_CASE("quantile inverts the cdf") {
    const BinMassCdf f(kTwo, {0.25, 0.75});
    CHECK(f.quantile_at(0.625) == doctest::Approx(1.5));
    CHECK(f.quantile_at(0.0) == 0.0);
    CHECK(f.quantile_at(1.0) == 2.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int k = 0; k < 200; ++k) {
        const double tau = u(rng);
        CHECK(f.cdf_at(f.quantile_at(tau)) == doctest::Approx(tau).epsilon(1e-12));
    }
}

TEST_CASE("density is mass over width") {
    CHECK(BinMassCdf(kTwo, {0.5, 0.5}).density_at(0.3) == doctest::Approx(0.5));
    CHECK(BinMassCdf(TimeGrid({0.0, 2.0}), {1.0}).density_at(1.0) == doctest::Approx(0.5));
    CHECK(BinMassCdf(TimeGrid({0.0, 1.0, 3.0}), {0.5, 0.5}).density_at(2.0) == doctest::Approx(0.25));
}

TEST_CASE("masses are floored and renormalized") {
    const BinMassCdf f(TimeGrid({0.0, 1.0, 2.0, 3.0}), {0.0, 2.0, 2.0});
    CHECK(f.mass(0) > 0.0);
    CHECK(f.mass(0) == doctest::Approx(kMassFloor).epsilon(1e-6));
    double sum = 0.0;
    for (double m : f.masses()) sum += m;
    CHECK(std::abs(sum - 1.0) < 1e-12);
    for (std::size_t i = 1; i <= f.bins(); ++i) CHECK(f.cdf_at_knot(i) > f.cdf_at_knot(i - 1));
    CHECK(f.cdf_at_knot(3) == 1.0);
}

TEST_CASE("bad masses are rejected") {
    CHECK_THROWS_AS(BinMassCdf(kTwo, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(BinMassCdf(kTwo, {-0.1, 1.1}), std::invalid_argument);
    CHECK_THROWS_AS(BinMassCdf(kTwo, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(BinMassCdf(kTwo, {NAN, 1.0}), std::invalid_argument);
}

TEST_CASE("knot constructor") {
    const auto f = BinMassCdf::from_knot_values(kTwo, std::vector<double>{0.0, 0.4, 1.0});
    CHECK(f.mass(0) == doctest::Approx(0.4));
    CHECK(f.mass(1) == doctest::Approx(0.6));
}

TEST_CASE("quantile curve") {
    const QuantileCurve q(QuantileGrid({0.0, 0.5, 1.0}), {0.0, 1.0, 4.0});
    CHECK(q.value_at(0.5) == 1.0);
    CHECK(q.upper() == 4.0);
    CHECK(q.cdf_at(1.0) == 0.5);
    CHECK(q.cdf_at(2.5) == doctest::Approx(0.75));
    const auto m = q.to_bin_masses(TimeGrid({0.0, 1.0, 4.0}));
    CHECK(m.mass(0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(QuantileCurve(QuantileGrid({0.0, 0.5, 1.0}), {0.0, 2.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(QuantileCurve(QuantileGrid({0.0, 0.5, 1.0}), {0.1, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("total variation") {
    const std::vector<double> p{0.5, 0.5};
    const std::vector<double> q{0.25, 0.75};
    CHECK(total_variation(p, q) == doctest::Approx(0.25));
    CHECK(total_variation(p, p) == 0.0);
}
