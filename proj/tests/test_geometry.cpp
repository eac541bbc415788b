#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orthozeros/errors.hpp"
#include "orthozeros/geometry.hpp"

using namespace oz;

TEST_CASE("endpoints must be strictly increasing and even in number") {
    CHECK_THROWS_AS(IntervalSystem({-1.0, 0.5, 0.2, 1.0}), DomainError);
    CHECK_THROWS_AS(IntervalSystem({-1.0, 0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(IntervalSystem({}), DomainError);
    IntervalSystem s({-1.0, -0.5, 0.5, 1.0});
    CHECK(s.l() == 2);
    CHECK(s.gap(1).first == -0.5);
    CHECK(s.band(2).second == 1.0);
}

TEST_CASE("locate prefers bands on endpoints") {
    IntervalSystem s({-1.0, -0.5, 0.5, 1.0});
    CHECK(s.locate(-0.5).kind == RegionKind::Band);
    CHECK(s.locate(0.0).kind == RegionKind::Gap);
    CHECK(s.locate(0.0).index == 1);
    CHECK(s.locate(2.0).kind == RegionKind::Right);
    CHECK(s.locate(-2.0).kind == RegionKind::Left);
    CHECK(s.in_E(0.75));
    CHECK_FALSE(s.in_E(0.25));
}

TEST_CASE("branch of sqrt(H)") {
    IntervalSystem s({-1.0, -0.5, 0.5, 1.0});
    // positive to the right of E, (-1)^{l-j} on gap j
    CHECK(s.sqrt_H(cplx(2.0, 0.0)).real() > 0.0);
    CHECK(s.sqrt_H_real(0.0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(s.sqrt_H_real(-2.0) == doctest::Approx(std::sqrt(3.0 * 1.5 * 2.5 * 1.0)).epsilon(1e-14));
    // boundary value matches the analytic branch just above the axis
    for (double x : {-0.8, 0.7}) {
        cplx b = s.boundary_sqrt_H(x);
        cplx z = s.sqrt_H(cplx(x, 1e-9));
        CHECK(std::abs(b - z) < 1e-6);
    }
    CHECK(s.h(0.75) > 0.0);
    CHECK(s.h(-0.75) < 0.0);
}

TEST_CASE("S is H divided by R") {
    IntervalSystem s({-1.0, -0.7, -0.1, 1.0});
    WeightSpec w(s, {-0.1}, BernsteinSzegoWeight{});
    CHECK(w.deg_R() == 1);
    CHECK(w.deg_S() == 3);
    for (double x : {-0.9, 0.3, 2.0}) CHECK(w.R(x) * w.S(x) == doctest::Approx(s.H(x)).epsilon(1e-13));
    CHECK(w.R_roots_in_band(1) == 0);
    CHECK(w.R_roots_in_band(2) == 1);
    CHECK_THROWS_AS(WeightSpec(s, {0.3}, BernsteinSzegoWeight{}), DomainError);
}

TEST_CASE("weight validation") {
    IntervalSystem s({-1.0, -0.5, 0.5, 1.0});
    SmoothWeight one{[](double) { return 1.0; }};
    WeightSpec ok(s, {-1.0, -0.5, 0.5, 1.0}, one);
    CHECK(validate(ok).ok);

    SmoothWeight lit{[](double) { return 1.0; }, SignMode::Literal};
    // H/h changes sign between the bands when W has none
    WeightSpec bad(s, {-1.0, -0.5, 0.5, 1.0}, lit);
    ValidationReport r = validate(bad);
    CHECK_FALSE(r.ok);
    CHECK(r.band >= 1);
    CHECK_FALSE(r.message.empty());

    SmoothWeight zero{[](double x) { return x - 0.75; }};
    WeightSpec z(s, {-1.0, -0.5, 0.5, 1.0}, zero);
    CHECK_FALSE(validate(z).ok);
}

TEST_CASE("Bernstein-Szego roots must avoid E") {
    IntervalSystem s({-1.0, -0.7, -0.1, 1.0});
    BernsteinSzegoWeight w;
    w.roots.push_back({cplx(0.5, 0.0), 1, 1});
    CHECK_THROWS(WeightSpec(s, {}, w));
    BernsteinSzegoWeight gap;
    gap.roots.push_back({cplx(-0.4, 0.0), 1, 1});
    WeightSpec ws(s, {}, gap);
    CHECK(ws.nu() == 1);
    CHECK(validate(ws).ok);
}
