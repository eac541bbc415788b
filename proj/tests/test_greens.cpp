#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orthozeros/greens.hpp"
#include "orthozeros/orthopoly.hpp"

using namespace oz;

TEST_CASE("single interval closed forms") {
    IntervalSystem s({-1.0, 1.0});
    // phi(z) = z + sqrt(z^2 - 1)
    CHECK(std::abs(green_phi_inf(s, cplx(2.0, 0.0))) == doctest::Approx(2.0 + std::sqrt(3.0)).epsilon(1e-12));
    cplx z(0.3, 0.8);
    cplx expect = z + std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
    CHECK(std::abs(std::abs(green_phi_inf(s, z)) - std::abs(expect)) < 1e-12);
    auto w = harmonic_measures(s);
    REQUIRE(w.size() == 1);
    CHECK(w[0] == 1.0);
}

TEST_CASE("harmonic measures against high precision references") {
    // references from independent 30-digit quadrature
    IntervalSystem s2({-1.0, -0.7, -0.1, 1.0});
    auto w2 = harmonic_measures(s2);
    CHECK(w2[0] == doctest::Approx(0.35618709614606201).epsilon(1e-10));
    CHECK(w2[1] == doctest::Approx(0.64381290385393798).epsilon(1e-10));
    RInfinity r = compute_r_inf(s2);
    CHECK(poly::eval(r.coeffs, 0.0) == doctest::Approx(0.42437435007633508).epsilon(1e-10));

    IntervalSystem s3({-1.0, -0.6, -0.2, 0.3, 0.7, 1.0});
    auto w3 = harmonic_measures(s3);
    CHECK(w3[0] == doctest::Approx(0.37327004146281357).epsilon(1e-10));
    CHECK(w3[1] == doctest::Approx(0.29343220926878904).epsilon(1e-10));
    CHECK(w3[2] == doctest::Approx(0.33329774926839738).epsilon(1e-10));

    IntervalSystem sym({-1.0, -0.5, 0.5, 1.0});
    auto ws = harmonic_measures(sym);
    CHECK(std::abs(ws[0] - 0.5) < 1e-12);
    CHECK(std::abs(ws[1] - 0.5) < 1e-12);
}

TEST_CASE("r_inf has one zero per gap") {
    IntervalSystem s({-1.0, -0.6, -0.2, 0.3, 0.7, 1.0});
    RInfinity r = compute_r_inf(s);
    REQUIRE(r.gap_zeros.size() == 2);
    for (int j = 1; j <= 2; ++j) {
        CHECK(r.gap_zeros[j - 1] > s.gap(j).first);
        CHECK(r.gap_zeros[j - 1] < s.gap(j).second);
        CHECK(std::abs(r.gap_residuals[j - 1]) < 1e-11);
    }
}

TEST_CASE("boundary modulus and growth of phi(z, inf)") {
    IntervalSystem s({-1.0, -0.7, -0.1, 1.0});
    for (double x : {-0.95, -0.8, 0.0, 0.9}) CHECK(std::abs(green_phi_inf(s, cplx(x, 1e-12))) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(green_phi_inf(s, cplx(-0.4, 0.0))) > 1.0);
    CHECK(std::abs(green_phi_inf(s, cplx(3.0, 0.0))) > std::abs(green_phi_inf(s, cplx(2.0, 0.0))));
}

TEST_CASE("phi(z, x0) has a pole at x0 and modulus one on E") {
    IntervalSystem s({-1.0, -0.7, -0.1, 1.0});
    RX0 r = compute_r_x0(s, -0.4);
    CHECK_FALSE(r.near_degenerate);
    double near = std::abs(green_phi_x0(s, r, cplx(-0.4 + 1e-3, 0.0)));
    double nearer = std::abs(green_phi_x0(s, r, cplx(-0.4 + 1e-4, 0.0)));
    CHECK(near > 1e2);
    CHECK(nearer / near == doctest::Approx(10.0).epsilon(2e-3));
    for (double x : {-0.9, 0.5}) CHECK(std::abs(green_phi_x0(s, r, cplx(x, 1e-12))) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("psi is unimodular on E") {
    IntervalSystem s({-1.0, -0.7, -0.1, 1.0});
    BernsteinSzegoWeight bw;
    bw.roots.push_back({cplx(-0.4, 0.0), 1, 1});
    WeightSpec w(s, {}, bw);
    PellSolver ps(w, 20);
    PellData pd = ps.at(12);
    PsiFunction psi = build_psi(w, 12, pd);
    for (double x : {-0.85, -0.05, 0.4, 0.95}) CHECK(std::abs(psi.boundary(x)) == doctest::Approx(1.0).epsilon(1e-6));
}
