#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "orthozeros/errors.hpp"
#include "orthozeros/geometry.hpp"

namespace oz {

struct QuadOptions {
    int order = 256;
    double tol = 1e-11;
    int max_order = 16384;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;
};

// Gauss-Legendre rule on [-1, 1]; cached per order.
const QuadratureRule& gauss_legendre(int n);

// Gauss-Chebyshev rule for int_a^b g(x) dx / sqrt((x-a)(b-x)).
QuadratureRule chebyshev_rule(double a, double b, int n);

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Evaluates Eigen expression templates; passes scalars through.
template <class T>
auto materialize(T&& v) {
    if constexpr (std::is_arithmetic_v<std::decay_t<T>>)
        return static_cast<double>(v);
    else
        return v.eval();
}

template <class F, class X>
using value_t = decltype(materialize(std::declval<F&>()(std::declval<X>())));

template <class T>
void check_finite(const T& v) {
    if constexpr (std::is_same_v<T, double>) {
        if (!std::isfinite(v)) throw DomainError("quadrature: non-finite integrand value");
    } else {
        if (!v.allFinite()) throw DomainError("quadrature: non-finite integrand value");
    }
}

// Repeats rule(order) with doubled order until two estimates agree.
template <class Rule>
auto doubling(Rule&& rule, const QuadOptions& opt) {
    int n = opt.order;
    auto prev = rule(n);
    while (true) {
        int m = 2 * n;
        auto cur = rule(m);
        double diff = magnitude(cur - prev);
        double scale = std::max(1.0, magnitude(cur));
        if (diff <= opt.tol * scale) return cur;
        if (m >= opt.max_order)
            throw ConvergenceError("quadrature: no convergence at order " + std::to_string(m));
        prev = cur;
        n = m;
    }
}

}  // namespace detail

// int_a^b g(x) dx / sqrt((x-a)(b-x)); g smooth, evaluated strictly inside (a, b).
template <class F>
auto band_integral(F&& g, double a, double b, const QuadOptions& opt = {}) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto rule = [&](int n) {
        using T = detail::value_t<F, double>;
        T sum = detail::materialize(g(mid));
        sum *= 0.0;
        for (int i = 1; i <= n; ++i) {
            double x = mid + half * std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * n));
            T v = g(x);
            detail::check_finite(v);
            sum += v;
        }
        return T(sum * (std::numbers::pi / n));
    };
    return detail::doubling(rule, opt);
}

// Same weight over the part [x0, x1] of [a, b]: theta-substitution x = mid + half cos(t),
// Gauss-Legendre in t. Orientation follows x0 -> x1.
template <class F>
auto gap_integral(F&& g, double a, double b, double x0, double x1, const QuadOptions& opt = {}) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto theta = [&](double x) {
        x = std::clamp(x, a, b);
        return 2.0 * std::atan2(std::sqrt(b - x), std::sqrt(x - a));
    };
    double t0 = theta(x0), t1 = theta(x1);
    // dx / sqrt((x-a)(b-x)) = -dt
    auto rule = [&](int n) {
        const auto& gl = gauss_legendre(n);
        using T = detail::value_t<F, double>;
        T sum = detail::materialize(g(mid));
        sum *= 0.0;
        double c = 0.5 * (t1 - t0), d = 0.5 * (t1 + t0);
        for (int i = 0; i < n; ++i) {
            double t = c * gl.nodes[i] + d;
            T v = g(mid + half * std::cos(t));
            detail::check_finite(v);
            sum += gl.weights[i] * v;
        }
        return T(sum * (-c));
    };
    QuadOptions o = opt;
    o.order = std::min(opt.order, 64);
    return detail::doubling(rule, o);
}

// Plain int_a^b f(x) dx for smooth f.
template <class F>
auto legendre_integral(F&& f, double a, double b, const QuadOptions& opt = {}) {
    auto rule = [&](int n) {
        const auto& gl = gauss_legendre(n);
        double c = 0.5 * (b - a), d = 0.5 * (a + b);
        using T = detail::value_t<F, double>;
        T sum = detail::materialize(f(d));
        sum *= 0.0;
        for (int i = 0; i < n; ++i) {
            T v = f(c * gl.nodes[i] + d);
            detail::check_finite(v);
            sum += gl.weights[i] * v;
        }
        return T(sum * c);
    };
    QuadOptions o = opt;
    o.order = std::min(opt.order, 64);
    return detail::doubling(rule, o);
}

template <class F>
auto gap_integral(F&& g, double a, double b, const QuadOptions& opt = {}) {
    return band_integral(std::forward<F>(g), a, b, opt);
}

// Integrals with 1/h and 1/sqrt(H) built in.
// int_{E_k} f(x)/h(x) dx
template <class F>
auto integrate_band(const IntervalSystem& sys, int k, F&& f, const QuadOptions& opt = {}) {
    auto [a, b] = sys.band(k);
    double s = sys.band_sign(k) / std::numbers::pi;
    return band_integral(
        [&](double x) { return detail::materialize(f(x) * (s / std::sqrt(std::abs(sys.rest(x, 2 * k - 1, 2 * k))))); }, a,
        b, opt);
}

// int_{E_k, x0..x1} f(x)/h(x) dx over part of a band.
template <class F>
auto integrate_band_part(const IntervalSystem& sys, int k, F&& f, double x0, double x1,
                         const QuadOptions& opt = {}) {
    auto [a, b] = sys.band(k);
    double s = sys.band_sign(k) / std::numbers::pi;
    return gap_integral(
        [&](double x) { return detail::materialize(f(x) * (s / std::sqrt(std::abs(sys.rest(x, 2 * k - 1, 2 * k))))); }, a,
        b, x0, x1, opt);
}

// int_{gap j} f(x)/sqrt(H(x)) dx with the real gap branch.
template <class F>
auto integrate_gap(const IntervalSystem& sys, int j, F&& f, const QuadOptions& opt = {}) {
    auto [a, b] = sys.gap(j);
    double s = sys.gap_sign(j);
    return gap_integral(
        [&](double x) { return detail::materialize(f(x) * (s / std::sqrt(std::abs(sys.rest(x, 2 * j, 2 * j + 1))))); }, a, b,
        opt);
}

template <class F>
auto integrate_gap_part(const IntervalSystem& sys, int j, F&& f, double x0, double x1,
                        const QuadOptions& opt = {}) {
    auto [a, b] = sys.gap(j);
    double s = sys.gap_sign(j);
    return gap_integral(
        [&](double x) { return detail::materialize(f(x) * (s / std::sqrt(std::abs(sys.rest(x, 2 * j, 2 * j + 1))))); }, a, b,
        x0, x1, opt);
}

struct PVResult {
    double value = 0.0;
    bool near_degenerate = false;
};

// p.v. int_a^b f(x)/(x - x0) dx by singularity subtraction.
PVResult pv_integral(const std::function<double(double)>& f, double a, double b, double x0,
                     const QuadOptions& opt = {});

// p.v. int_gap f(x)/((x - x0) sqrt(H(x))) dx, real gap branch.
PVResult pv_gap_integral(const IntervalSystem& sys, int j, const std::function<double(double)>& f,
                         double x0, const QuadOptions& opt = {});

// int_from^inf f(t) dt; f may carry a 1/sqrt(t - from) singularity at the start.
// Throws DomainError when the integrand decays slower than t^{-3/2}.
double tail_integral(const std::function<double(double)>& f, double from, const QuadOptions& opt = {});

// int_{-inf}^to f(t) dt, same conditions mirrored.
double left_tail_integral(const std::function<double(double)>& f, double to,
                          const QuadOptions& opt = {});

}  // namespace oz
