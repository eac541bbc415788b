#include "orthozeros/greens.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "orthozeros/errors.hpp"
#include "orthozeros/orthopoly.hpp"

namespace oz {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

Eigen::VectorXd monomials(double x, int count) {
    Eigen::VectorXd v(count);
    double p = 1.0;
    for (int c = 0; c < count; ++c) {
        v[c] = p;
        p *= x;
    }
    return v;
}

double condition_number(const Eigen::MatrixXd& A) {
    if (A.size() == 0) return 1.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& s = svd.singularValues();
    return s(0) / s(s.size() - 1);
}

// Residue of the differential at its pole.
double residue(const IntervalSystem& sys, const Differential& d) {
    return d.coef * poly::eval(d.p, *d.pole) / sys.sqrt_H_real(*d.pole);
}

double eval_term(const Differential& d, double x) {
    double v = d.coef * poly::eval(d.p, x);
    return d.pole ? v / (x - *d.pole) : v;
}

// Integral over [lo, hi] (lo < hi) inside one band, gap or exterior piece, along the upper rim.
cplx piece(const IntervalSystem& sys, const Differential& d, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const Region reg = sys.locate(mid);
    const bool pole_inside = d.pole && *d.pole > lo && *d.pole < hi;
    const cplx semicircle = pole_inside ? -kI * kPi * residue(sys, d) : cplx(0.0);
    auto f = [&](double x) { return eval_term(d, x); };
    const double a1 = sys.endpoints().front(), a2l = sys.endpoints().back();

    switch (reg.kind) {
        case RegionKind::Band:
            return -kI * kPi * integrate_band_part(sys, reg.index, f, lo, hi);
        case RegionKind::Gap: {
            int j = reg.index;
            auto [a, b] = sys.gap(j);
            if (!pole_inside) return integrate_gap_part(sys, j, f, lo, hi);
            Differential q{d.p, std::nullopt, d.coef};
            double full = pv_gap_integral(sys, j, [&](double x) { return eval_term(q, x); }, *d.pole).value;
            double outside = 0.0;
            if (lo > a) outside += integrate_gap_part(sys, j, f, a, lo);
            if (hi < b) outside += integrate_gap_part(sys, j, f, hi, b);
            return full - outside + semicircle;
        }
        case RegionKind::Right: {
            // x = a_{2l} + t^2, dx / sqrt(H) = 2 dt / sqrt(H / (x - a_{2l}))
            int n2 = 2 * sys.l();
            auto G = [&](double t) {
                double x = a2l + t * t;
                return 2.0 * d.coef * poly::eval(d.p, x) / std::sqrt(sys.rest(x, n2, 0));
            };
            double t0 = std::sqrt(lo - a2l), t1 = std::sqrt(hi - a2l);
            if (!d.pole) return legendre_integral(G, t0, t1);
            if (*d.pole <= a2l)
                return legendre_integral([&](double t) { return G(t) / (a2l + t * t - *d.pole); }, t0, t1);
            double tp = std::sqrt(*d.pole - a2l);
            // x - pole = (t - tp)(t + tp)
            auto Gp = [&](double t) { return G(t) / (t + tp); };
            if (!pole_inside)
                return legendre_integral([&](double t) { return Gp(t) / (t - tp); }, t0, t1);
            return pv_integral(Gp, t0, t1, tp).value + semicircle;
        }
        case RegionKind::Left: {
            // x = a_1 - t^2, sqrt(H) = (-1)^l t sqrt|H / (x - a_1)|
            double sg = (sys.l() % 2 == 0) ? 1.0 : -1.0;
            auto G = [&](double t) {
                double x = a1 - t * t;
                return sg * 2.0 * d.coef * poly::eval(d.p, x) / std::sqrt(std::abs(sys.rest(x, 1, 0)));
            };
            double t0 = std::sqrt(a1 - hi), t1 = std::sqrt(a1 - lo);
            if (!d.pole) return legendre_integral(G, t0, t1);
            if (*d.pole >= a1)
                return legendre_integral([&](double t) { return G(t) / (a1 - t * t - *d.pole); }, t0, t1);
            double tp = std::sqrt(a1 - *d.pole);
            // x - pole = -(t - tp)(t + tp)
            auto Gp = [&](double t) { return -G(t) / (t + tp); };
            if (!pole_inside)
                return legendre_integral([&](double t) { return Gp(t) / (t - tp); }, t0, t1);
            return pv_integral(Gp, t0, t1, tp).value + semicircle;
        }
    }
    return 0.0;
}

cplx axis_integral(const IntervalSystem& sys, const Differential& d, double from, double to) {
    if (from == to) return 0.0;
    double lo = std::min(from, to), hi = std::max(from, to);
    std::vector<double> cuts{lo};
    for (double a : sys.endpoints())
        if (a > lo && a < hi) cuts.push_back(a);
    cuts.push_back(hi);
    cplx s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += piece(sys, d, cuts[i], cuts[i + 1]);
    return (from < to) ? s : -s;
}

// Straight leg from the real point xr (upper rim) to z with Im z > 0; xi = xr + s^2 (z - xr).
cplx leg_integral(const IntervalSystem& sys, const Differential& d, double xr, cplx z) {
    using boost::math::quadrature::gauss_kronrod;
    cplx dz = z - cplx(xr, 0.0);
    auto F = [&](double s) -> cplx {
        if (s == 0.0) return 0.0;
        cplx xi = xr + s * s * dz;
        cplx v = d.coef * poly::eval(d.p, xi) / sys.sqrt_H(xi);
        if (d.pole) v /= (xi - *d.pole);
        return v * 2.0 * s * dz;
    };
    double err = 0.0;
    double re = gauss_kronrod<double, 31>::integrate([&](double s) { return F(s).real(); }, 0.0, 1.0, 20,
                                                     1e-13, &err);
    double im = gauss_kronrod<double, 31>::integrate([&](double s) { return F(s).imag(); }, 0.0, 1.0, 20,
                                                     1e-13, &err);
    return {re, im};
}

// Branch point from which the argument of a Green's function at Re z is measured.
double base_point(const IntervalSystem& sys, double x, const std::vector<double>& poles) {
    auto clear = [&](double b) {
        for (double p : poles)
            if ((p > std::min(x, b)) && (p < std::max(x, b))) return false;
        return true;
    };
    Region r = sys.locate(x);
    switch (r.kind) {
        case RegionKind::Right: return sys.endpoints().back();
        case RegionKind::Left: return sys.endpoints().front();
        case RegionKind::Band: return sys.band(r.index).second;
        case RegionKind::Gap: {
            auto [a, b] = sys.gap(r.index);
            return clear(b) ? b : a;
        }
    }
    return sys.endpoints().back();
}

}  // namespace

// ---------------------------------------------------------------------------

RInfinity compute_r_inf(const IntervalSystem& sys) {
    RInfinity out;
    const int l = sys.l();
    if (l == 1) {
        out.coeffs = {1.0};
        return out;
    }
    Eigen::MatrixXd A(l - 1, l - 1);
    Eigen::VectorXd rhs(l - 1);
    for (int j = 1; j < l; ++j) {
        Eigen::VectorXd m = integrate_gap(sys, j, [&](double x) { return monomials(x, l); });
        A.row(j - 1) = m.head(l - 1).transpose();
        rhs[j - 1] = -m[l - 1];
    }
    out.condition = condition_number(A);
    Eigen::VectorXd c = A.partialPivLu().solve(rhs);
    out.coeffs.assign(c.data(), c.data() + c.size());
    out.coeffs.push_back(1.0);
    for (int j = 1; j < l; ++j) {
        out.gap_residuals.push_back(
            integrate_gap(sys, j, [&](double x) { return poly::eval(out.coeffs, x); }));
        auto [a, b] = sys.gap(j);
        double fa = poly::eval(out.coeffs, a), fb = poly::eval(out.coeffs, b);
        if (fa * fb > 0.0) throw InvariantError("r_inf: no sign change on a gap");
        double lo = a, hi = b;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * sys.span(); ++it) {
            double m = 0.5 * (lo + hi);
            if ((poly::eval(out.coeffs, m) > 0.0) == (fa > 0.0)) lo = m; else hi = m;
        }
        out.gap_zeros.push_back(0.5 * (lo + hi));
    }
    return out;
}

std::vector<double> harmonic_measures(const IntervalSystem& sys, const RInfinity& r) {
    if (sys.l() == 1) return {1.0};
    std::vector<double> w;
    for (int k = 1; k <= sys.l(); ++k)
        w.push_back(integrate_band(sys, k, [&](double x) { return poly::eval(r.coeffs, x); }));
    return w;
}

std::vector<double> harmonic_measures(const IntervalSystem& sys) {
    return harmonic_measures(sys, compute_r_inf(sys));
}

RX0 compute_r_x0(const IntervalSystem& sys, double x0) {
    return compute_r_x0(sys, compute_r_inf(sys), x0);
}

RX0 compute_r_x0(const IntervalSystem& sys, const RInfinity& rinf, double x0) {
    if (sys.in_E(x0)) throw DomainError("compute_r_x0: x0 lies on E");
    const int l = sys.l();
    RX0 out;
    out.x0 = x0;
    for (double a : sys.endpoints())
        if (std::abs(a - x0) < 1e-8 * sys.span()) out.near_degenerate = true;
    const double sH = sys.sqrt_H_real(x0);
    const Region reg = sys.locate(x0);

    // Row j: p.v. int_gap xi^c / ((xi - x0) sqrt(H)), c = 0..l-1, and int_gap xi^c / sqrt(H).
    Eigen::MatrixXd P(l - 1, l), G(l - 1, l);
    for (int j = 1; j < l; ++j) {
        G.row(j - 1) = integrate_gap(sys, j, [&](double x) { return monomials(x, l); }).transpose();
        if (reg.kind == RegionKind::Gap && reg.index == j) {
            for (int c = 0; c < l; ++c)
                P(j - 1, c) = pv_gap_integral(sys, j, [c](double x) { return std::pow(x, c); }, x0).value;
        } else {
            P.row(j - 1) = integrate_gap(sys, j, [&](double x) { return Eigen::VectorXd(monomials(x, l) / (x - x0)); })
                               .transpose();
        }
    }

    Eigen::MatrixXd A(l, l);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(l);
    A.row(0) = monomials(x0, l).transpose();
    rhs[0] = -sH;
    if (l > 1) A.bottomRows(l - 1) = P;
    out.condition = condition_number(A);
    Eigen::VectorXd r = A.partialPivLu().solve(rhs);
    out.r.assign(r.data(), r.data() + l);
    out.w1_residual = std::abs(poly::eval(out.r, x0) + sH);
    for (int j = 1; j < l; ++j) out.pv_residuals.push_back(P.row(j - 1).dot(r));

    // M monic of degree l-1 with int_gap M / sqrt(H) = -sqrt(H(x0)) p.v. int_gap 1 / ((xi - x0) sqrt(H)).
    if (l == 1) {
        out.M = {1.0};
    } else {
        Eigen::MatrixXd B = G.leftCols(l - 1);
        Eigen::VectorXd b = -sH * P.col(0) - G.col(l - 1);
        Eigen::VectorXd m = B.partialPivLu().solve(b);
        out.M.assign(m.data(), m.data() + l - 1);
        out.M.push_back(1.0);
    }
    // r - ((xi - x0)(r_inf - M) - sqrt(H(x0)))
    poly::Poly diff = poly::add(rinf.coeffs, poly::scale(out.M, -1.0));
    poly::Poly rep = poly::add(poly::multiply({-x0, 1.0}, diff), {-sH});
    poly::Poly res = poly::add(out.r, poly::scale(rep, -1.0));
    for (double c : res) out.identity_residual = std::max(out.identity_residual, std::abs(c));
    return out;
}

cplx path_integral(const IntervalSystem& sys, const std::vector<Differential>& terms, double base,
                   cplx z) {
    if (z.imag() < 0.0) return std::conj(path_integral(sys, terms, base, std::conj(z)));
    double x = z.real();
    if (z.imag() == 0.0) {
        cplx s = 0.0;
        for (const auto& d : terms) {
            if (d.pole && *d.pole == x) throw DomainError("path_integral: endpoint at a pole");
            s += axis_integral(sys, d, base, x);
        }
        return s;
    }
    // Keep the foot of the leg away from poles.
    double xr = x;
    for (const auto& d : terms) {
        if (d.pole && std::abs(*d.pole - xr) < 1e-12 * sys.span()) {
            double room = 0.25 * z.imag();
            for (double a : sys.endpoints()) room = std::min(room, 0.5 * std::abs(a - xr));
            xr += (room > 0.0) ? room : 0.25 * z.imag();
        }
    }
    cplx s = 0.0;
    for (const auto& d : terms) s += axis_integral(sys, d, base, xr) + leg_integral(sys, d, xr, z);
    return s;
}

cplx green_phi_inf(const IntervalSystem& sys, cplx z) {
    return green_phi_inf(sys, compute_r_inf(sys), z);
}

cplx green_phi_inf(const IntervalSystem& sys, const RInfinity& r, cplx z) {
    if (z.imag() == 0.0 && sys.in_E(z.real())) throw DomainError("green_phi_inf: z lies on E");
    double base = base_point(sys, z.real(), {});
    return std::exp(path_integral(sys, {{r.coeffs, std::nullopt, 1.0}}, base, z));
}

cplx green_phi_x0(const IntervalSystem& sys, cplx z, double x0) {
    return green_phi_x0(sys, compute_r_x0(sys, x0), z);
}

cplx green_phi_x0(const IntervalSystem& sys, const RX0& r, cplx z) {
    if (z.imag() == 0.0 && sys.in_E(z.real())) throw DomainError("green_phi_x0: z lies on E");
    if (z == cplx(r.x0, 0.0)) throw DomainError("green_phi_x0: z is the pole");
    double base = base_point(sys, z.real(), {r.x0});
    return std::exp(path_integral(sys, {{r.r, r.x0, 1.0}}, base, z));
}

// ---------------------------------------------------------------------------

PsiFunction::PsiFunction(IntervalSystem sys, std::vector<Differential> terms, double sign,
                         int inf_exponent)
    : sys_(std::move(sys)), terms_(std::move(terms)), sign_(sign), inf_exp_(inf_exponent) {}

cplx PsiFunction::operator()(cplx z) const {
    if (z.imag() == 0.0 && sys_.in_E(z.real())) throw DomainError("psi: z lies on E; use boundary");
    return sign_ * std::exp(path_integral(sys_, terms_, sys_.endpoints().back(), z));
}

cplx PsiFunction::boundary(double x) const {
    if (!sys_.in_band_interior(x)) throw DomainError("psi boundary: x is not interior to E");
    cplx s = 0.0;
    for (const auto& d : terms_) s += axis_integral(sys_, d, sys_.endpoints().back(), x);
    return sign_ * std::exp(s);
}

PsiFunction build_psi(const WeightSpec& spec, int n, const PellData& pell) {
    if (!spec.is_bernstein_szego()) throw DomainError("build_psi: needs a Bernstein-Szego weight");
    const auto& sys = spec.system();
    const int l = sys.l();
    const int dg = l - 1;
    for (const auto& r : spec.bs().roots)
        if (r.w.imag() != 0.0) throw DomainError("build_psi: complex rho roots are not supported");
    int e_inf = 2 * n + spec.deg_R() - (spec.nu() + dg);
    if (e_inf < 0) throw DomainError("build_psi: 2n + deg R < nu + deg g");
    RInfinity rinf = compute_r_inf(sys);
    std::vector<Differential> terms;
    terms.push_back({rinf.coeffs, std::nullopt, static_cast<double>(e_inf)});
    for (const auto& r : spec.bs().roots) {
        RX0 rx = compute_r_x0(sys, rinf, r.w.real());
        terms.push_back({rx.r, r.w.real(), static_cast<double>(r.multiplicity * r.eps)});
    }
    for (int j = 0; j < dg; ++j) {
        RX0 rx = compute_r_x0(sys, rinf, pell.x[j]);
        terms.push_back({rx.r, pell.x[j], static_cast<double>(pell.delta[j])});
    }
    // psi(a_{2l}) = -1 when a_{2l} is a root of R, +1 otherwise.
    double sign = spec.R_has(sys.endpoints().back()) ? -1.0 : 1.0;
    return PsiFunction(sys, std::move(terms), sign, e_inf);
}

}  // namespace oz
