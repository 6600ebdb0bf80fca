#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "rpifs/io.hpp"
#include "rpifs/projline.hpp"

using namespace rpifs;

TEST_CASE("normalize canonical forms") {
    CHECK(ProjPoint::normalize(6.0, 2.0) == ProjPoint(3.0));
    CHECK(ProjPoint::normalize(-4.0, 0.0) == ProjPoint::infinity());
    CHECK(ProjPoint::normalize(0.0, 5.0) == ProjPoint(0.0));
    CHECK_THROWS_AS(ProjPoint::normalize(0.0, 0.0), DomainError);
}

TEST_CASE("scale invariance of normalize") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
        double h0 = u(gen), h1 = u(gen), c = u(gen);
        if ((h0 == 0.0 && h1 == 0.0) || c == 0.0) continue;
        const ProjPoint a = ProjPoint::normalize(c * h0, c * h1);
        const ProjPoint b = ProjPoint::normalize(h0, h1);
        REQUIRE(a.is_infinity() == b.is_infinity());
        // Equal up to the rounding of the two divisions.
        if (!a.is_infinity())
            CHECK(std::abs(a.x() - b.x()) <= 1e-12 * std::max(1.0, std::abs(b.x())));
    }
}

TEST_CASE("chart operations") {
    CHECK(oplus(ProjPoint(1.0), ProjPoint(2.0)) == ProjPoint(3.0));
    CHECK(oplus(ProjPoint(4.5), ProjPoint(0.0)) == ProjPoint(4.5));
    CHECK(oplus(ProjPoint(-1.0), ProjPoint(1.0)) == ProjPoint(0.0));
    CHECK(star(ProjPoint(2.0), ProjPoint(3.0)) == ProjPoint(6.0));
    CHECK(scalar(3.0, ProjPoint(-1.0)) == ProjPoint(-3.0));
    CHECK(ominus(ProjPoint(1.0), ProjPoint(1.0)) == ProjPoint(0.0));

    CHECK_THROWS_AS(oplus(ProjPoint::infinity(), ProjPoint(1.0)), DomainError);
    CHECK_THROWS_AS(star(ProjPoint(1.0), ProjPoint::infinity()), DomainError);
    CHECK_THROWS_AS(scalar(2.0, ProjPoint::infinity()), DomainError);
    CHECK_THROWS_AS(ominus(ProjPoint::infinity(), ProjPoint::infinity()), DomainError);
}

TEST_CASE("projective metric") {
    CHECK(dist(ProjPoint(-1.0), ProjPoint(1.0)) == 2.0);
    CHECK(dist(ProjPoint(0.37), ProjPoint(0.37)) == 0.0);
    // Gap between the level-1 Cantor cones [-1,-1/3] and [1/3,1].
    CHECK(dist(ProjPoint(1.0 / 3.0), ProjPoint(1.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(dist(ProjPoint::infinity(), ProjPoint(0.0)), DomainError);
}

TEST_CASE("metric axioms on random points") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int k = 0; k < 2000; ++k) {
        ProjPoint p(u(gen)), q(u(gen)), s(u(gen));
        CHECK(dist(p, q) >= 0.0);
        CHECK(dist(p, q) == dist(q, p));
        CHECK(dist(p, s) <= dist(p, q) + dist(q, s) + 1e-12);
        CHECK((dist(p, q) == 0.0) == (p == q));
    }
}

TEST_CASE("chart group and distributivity on random triples") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    const ProjPoint zero(0.0);
    for (int k = 0; k < 1000; ++k) {
        ProjPoint p(u(gen)), q(u(gen)), s(u(gen));
        CHECK(oplus(p, q) == oplus(q, p));  // FP addition commutes exactly
        CHECK(approx_eq(oplus(oplus(p, q), s), oplus(p, oplus(q, s)), 1e-12));
        CHECK(oplus(p, zero) == p);
        CHECK(oplus(p, scalar(-1.0, p)) == zero);
        CHECK(approx_eq(star(p, oplus(q, s)), oplus(star(p, q), star(p, s)), 1e-9));
    }
}

TEST_CASE("approx_eq separates tolerance from equality") {
    CHECK(approx_eq(ProjPoint(1.0), ProjPoint(1.0 + 1e-13), 1e-12));
    CHECK_FALSE(approx_eq(ProjPoint(1.0), ProjPoint(1.1), 1e-12));
    CHECK(approx_eq(ProjPoint::infinity(), ProjPoint::infinity(), 0.0));
    CHECK_FALSE(approx_eq(ProjPoint::infinity(), ProjPoint(1e300), 1e300));
    CHECK_FALSE(ProjPoint(1.0) == ProjPoint(1.0 + 1e-13));
}

TEST_CASE("JSON round trip") {
    nlohmann::json j = ProjPoint(0.25);
    CHECK(j == nlohmann::json::array({0.25, 1.0}));
    CHECK(proj_point_from_json(j) == ProjPoint(0.25));
    nlohmann::json inf = ProjPoint::infinity();
    CHECK(inf == nlohmann::json::array({1.0, 0.0}));
    CHECK(proj_point_from_json(inf).is_infinity());
    CHECK(proj_point_from_json(nlohmann::json::array({6.0, 2.0})) == ProjPoint(3.0));
}
