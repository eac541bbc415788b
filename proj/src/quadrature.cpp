#include "orthozeros/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace oz {

namespace {

// (P_n(x), P_{n-1}(x))
std::pair<double, double> legendre_pair(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, p0};
}

QuadratureRule build_legendre(int n) {
    QuadratureRule r;
    r.order = n;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [pn, pm] = legendre_pair(n, x);
            double dx = pn / (n * (x * pn - pm) / (x * x - 1.0));
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        auto [pn, pm] = legendre_pair(n, x);
        double dp = n * (x * pn - pm) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: order must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<QuadratureRule>(build_legendre(n))).first;
    return *it->second;
}

QuadratureRule chebyshev_rule(double a, double b, int n) {
    if (n < 1) throw DomainError("chebyshev_rule: order must be positive");
    QuadratureRule r;
    r.order = n;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 1; i <= n; ++i) {
        r.nodes.push_back(mid + half * std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * n)));
        r.weights.push_back(std::numbers::pi / n);
    }
    return r;
}

PVResult pv_integral(const std::function<double(double)>& f, double a, double b, double x0,
                     const QuadOptions& opt) {
    if (!(x0 > a && x0 < b)) throw DomainError("pv_integral: pole must lie strictly inside (a, b)");
    PVResult res;
    double len = b - a;
    res.near_degenerate = std::min(x0 - a, b - x0) < 1e-8 * len;
    double f0 = f(x0);
    double eps = 1e-5 * len;
    double df = (f(std::min(x0 + eps, b)) - f(std::max(x0 - eps, a))) /
                (std::min(x0 + eps, b) - std::max(x0 - eps, a));
    auto rule = [&](int n) {
        const auto& gl = gauss_legendre(n);
        double c = 0.5 * (b - a), d = 0.5 * (a + b), s = 0.0;
        for (int i = 0; i < n; ++i) {
            double x = c * gl.nodes[i] + d;
            double v = (std::abs(x - x0) < 1e-9 * len) ? df : (f(x) - f0) / (x - x0);
            s += gl.weights[i] * v;
        }
        return s * c;
    };
    QuadOptions o = opt;
    o.order = std::min(opt.order, 64);
    res.value = detail::doubling(rule, o) + f0 * std::log((b - x0) / (x0 - a));
    return res;
}

PVResult pv_gap_integral(const IntervalSystem& sys, int j, const std::function<double(double)>& f,
                         double x0, const QuadOptions& opt) {
    auto [a, b] = sys.gap(j);
    if (!(x0 > a && x0 < b)) throw DomainError("pv_gap_integral: pole must lie strictly inside the gap");
    PVResult res;
    double len = b - a;
    res.near_degenerate = std::min(x0 - a, b - x0) < 1e-8 * sys.span();
    double s = sys.gap_sign(j);
    auto g = [&](double x) { return f(x) * s / std::sqrt(std::abs(sys.rest(x, 2 * j, 2 * j + 1))); };
    double g0 = g(x0);
    double eps = 1e-5 * len;
    double lo = std::max(x0 - eps, a + 0.5 * (x0 - a)), hi = std::min(x0 + eps, b - 0.5 * (b - x0));
    double dg = (g(hi) - g(lo)) / (hi - lo);
    // The Chebyshev-weighted p.v. of 1/(x - x0) over the full interval vanishes.
    res.value = band_integral(
        [&](double x) { return (std::abs(x - x0) < 1e-9 * len) ? dg : (g(x) - g0) / (x - x0); }, a, b,
        opt);
    return res;
}

double tail_integral(const std::function<double(double)>& f, double from, const QuadOptions& opt) {
    double L = std::max(1.0, std::abs(from));
    double x1 = from + 1e3 * L, x2 = from + 1e4 * L;
    double f1 = std::abs(f(x1)), f2 = std::abs(f(x2));
    if (f1 > 0.0) {
        double p = (f2 > 0.0) ? std::log(f1 / f2) / std::log(10.0) : 100.0;
        if (p < 1.5) throw DomainError("tail_integral: integrand decays too slowly (exponent " + std::to_string(p) + ")");
    }
    auto rule = [&](int n) {
        const auto& gl = gauss_legendre(n);
        double c = 0.25 * std::numbers::pi, s = 0.0;
        for (int i = 0; i < n; ++i) {
            double phi = c * gl.nodes[i] + c;
            double u = std::tan(phi), sec = 1.0 / std::cos(phi);
            double v = f(from + L * u * u) * 2.0 * L * u * sec * sec;
            detail::check_finite(v);
            s += gl.weights[i] * v;
        }
        return s * c;
    };
    QuadOptions o = opt;
    o.order = std::min(opt.order, 64);
    return detail::doubling(rule, o);
}

double left_tail_integral(const std::function<double(double)>& f, double to, const QuadOptions& opt) {
    return tail_integral([&](double s) { return f(-s); }, -to, opt);
}

}  // namespace oz
