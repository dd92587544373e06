#include "doctest.h"

#include <stdexcept>

#include "survscore/kaplan_meier.hpp"

using namespace survscore;

TEST_CASE("product-limit by hand") {
    const std::vector<CensoredObservation> obs{{1, true}, {2, false}, {3, true}, {4, false}};
    const auto km = kaplan_meier(obs);
    CHECK(km.at(0.5) == 1.0);
    CHECK(km.at(1.0) == doctest::Approx(0.75));
    CHECK(km.at(2.5) == doctest::Approx(0.75));
    CHECK(km.at(3.0) == doctest::Approx(0.375));
    CHECK(km.at(10.0) == doctest::Approx(0.375));
    REQUIRE(km.event_times().size() == 2);
}

TEST_CASE("all censored") {
    const std::vector<CensoredObservation> obs{{1, false}, {2, false}};
    const auto km = kaplan_meier(obs);
    CHECK(km.at(0.0) == 1.0);
    CHECK(km.at(5.0) == 1.0);
    CHECK(km.event_times().empty());
}

TEST_CASE("single event") {
    const std::vector<CensoredObservation> obs{{1, true}};
    const auto km = kaplan_meier(obs);
    CHECK(km.at(0.99) == 1.0);
    CHECK(km.at(1.0) == 0.0);
}

TEST_CASE("ties: events leave before censored rows at the same time") {
    const std::vector<CensoredObservation> obs{{1, true}, {1, false}, {1, true}, {2, true}};
    const auto km = kaplan_meier(obs);
    CHECK(km.at(1.0) == doctest::Approx(0.5));
    CHECK(km.at(2.0) == 0.0);
}

TEST_CASE("bin masses") {
    const std::vector<CensoredObservation> obs{{1, true}, {2, false}, {3, true}, {4, false}};
    const auto m = kaplan_meier(obs).bin_masses(TimeGrid({0.0, 1.0, 2.0, 5.0}));
    REQUIRE(m.size() == 3);
    CHECK(m[0] == doctest::Approx(0.25));
    CHECK(m[1] == doctest::Approx(0.0));
    CHECK(m[2] == doctest::Approx(0.75));
}
