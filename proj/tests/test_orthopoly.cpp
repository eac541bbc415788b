#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "orthozeros/errors.hpp"
#include "orthozeros/orthopoly.hpp"

using namespace oz;
using std::numbers::pi;

TEST_CASE("Chebyshev weight on [-1, 1]") {
    IntervalSystem s({-1.0, 1.0});
    WeightSpec w(s, {}, BernsteinSzegoWeight{});
    DiscretizedMeasure mu = discretize(w, 256);
    CHECK(mu.total_mass == doctest::Approx(1.0).epsilon(1e-13));
    Recurrence r = stieltjes_recurrence(mu, 40);
    CHECK(r.beta[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.beta[1] == doctest::Approx(0.5).epsilon(1e-13));
    for (int k = 0; k < 40; ++k) CHECK(std::abs(r.alpha[k]) < 1e-13);
    for (int k = 2; k < 40; ++k) CHECK(r.beta[k] == doctest::Approx(0.25).epsilon(1e-12));
    for (int n : {1, 7, 30}) {
        auto z = polynomial_zeros(r, n);
        for (int k = 1; k <= n; ++k)
            CHECK(std::abs(z[n - k] - std::cos((2.0 * k - 1.0) * pi / (2.0 * n))) < 1e-12);
        CHECK(orthogonality_residual(mu, r, n) < 1e-12);
        // P_n = sqrt(2) T_n
        CHECK(orthonormal_value(r, n, 0.3) == doctest::Approx(std::sqrt(2.0) * std::cos(n * std::acos(0.3))).epsilon(1e-11));
    }
}

TEST_CASE("second kind weight on [-1, 1]") {
    IntervalSystem s({-1.0, 1.0});
    SmoothWeight one{[](double) { return 1.0; }};
    WeightSpec w(s, {-1.0, 1.0}, one);
    Recurrence r = stieltjes_recurrence(discretize(w, 256), 20);
    CHECK(r.beta[0] == doctest::Approx(0.5).epsilon(1e-13));
    for (int k = 1; k < 20; ++k) CHECK(r.beta[k] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("Pell identity on one interval") {
    IntervalSystem s({-1.0, 1.0});
    WeightSpec w(s, {}, BernsteinSzegoWeight{});
    PellSolver ps(w, 50);
    for (int n = 1; n <= 50; ++n) {
        PellData pd = ps.at(n);
        CHECK(pd.residual < 1e-10);
        CHECK(pd.leading == doctest::Approx(1.0).epsilon(1e-10));
        double x = 0.37;
        double T = std::cos(n * std::acos(x));
        double U = std::sin(n * std::acos(x)) / std::sqrt(1.0 - x * x);
        CHECK(pd.P(x) == doctest::Approx(std::sqrt(2.0) * T).epsilon(1e-10));
        CHECK(pd.Q(x) == doctest::Approx(std::sqrt(2.0) * U).epsilon(1e-10));
    }
}

TEST_CASE("two bands: recurrence and Pell data against references") {
    // references from an independent 40-digit discretization
    IntervalSystem s({-1.0, -0.7, -0.1, 1.0});
    WeightSpec w(s, {-0.1}, BernsteinSzegoWeight{});
    PellSolver ps(w, 20);
    const Recurrence& r = ps.recurrence_R();
    double alpha[] = {-0.3, 0.21652173913043478, 0.11729217557526375, -0.26473611009354885, 0.27744724746619044,
                      -0.011029202692601239};
    double beta[] = {1.0, 0.575, 0.12400964083175803, 0.36031603448695797, 0.22049320156299795,
                     0.13655092432396035};
    for (int k = 0; k < 6; ++k) {
        CHECK(r.alpha[k] == doctest::Approx(alpha[k]).epsilon(1e-11));
        CHECK(r.beta[k] == doctest::Approx(beta[k]).epsilon(1e-11));
    }
    const Recurrence& q = ps.recurrence_S();
    CHECK(q.alpha[0] == doctest::Approx(alpha[1]).epsilon(1e-11));
    CHECK(q.beta[0] == doctest::Approx(beta[1]).epsilon(1e-11));

    PellData pd = ps.at(10);
    CHECK(pd.residual < 1e-10);
    REQUIRE(pd.x.size() == 1);
    CHECK(pd.x[0] == doctest::Approx(-0.68478877830225741).epsilon(1e-9));
    CHECK(pd.delta[0] == 1);
    CHECK(pd.gap_root_counts[0] == 1);
    CHECK(interlacing_check(w, pd).ok);
}

TEST_CASE("zero counting") {
    IntervalSystem s({-1.0, -0.5, 0.5, 1.0});
    ZeroReport z = count_zeros(s, {-0.9, -0.6, 0.1, 0.7});
    CHECK(z.band_counts == std::vector<int>{2, 1});
    CHECK(z.gap_occupancy == std::vector<int>{1});
    CHECK(z.gap_zero_locations[0] == doctest::Approx(0.1));
    CHECK_THROWS_AS(count_zeros(s, {-0.2, 0.1}), InvariantError);
}

TEST_CASE("a negative point mass is rejected") {
    IntervalSystem s({-1.0, -0.7, -0.1, 1.0});
    BernsteinSzegoWeight bw;
    bw.roots.push_back({cplx(-0.4, 0.0), 1, -1});
    WeightSpec w(s, {}, bw);
    CHECK_THROWS_AS(discretize(w, 128, MeasureSide::R), WeightError);
}

TEST_CASE("non-positive weights are rejected") {
    IntervalSystem s({-1.0, -0.7, -0.1, 1.0});
    SmoothWeight lit{[](double) { return 1.0; }, SignMode::Literal};
    WeightSpec w(s, {}, lit);
    CHECK_THROWS_AS(discretize(w, 64), WeightError);
}
