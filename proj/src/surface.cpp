#include "orthozeros/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "orthozeros/errors.hpp"
#include "orthozeros/greens.hpp"
#include "orthozeros/quadrature.hpp"

namespace oz {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd basis_values(const FirstKindBasis& basis, double x) {
    Eigen::VectorXd v(basis.genus());
    for (int k = 0; k < basis.genus(); ++k) v[k] = poly::eval(basis.d[k], x);
    return v;
}

// d(x) / sqrt(H(x)) on gap j in the theta chart, i.e. the integrand against dtheta.
Eigen::VectorXd gap_density_theta(const IntervalSystem& sys, const FirstKindBasis& basis, int j,
                                  double theta) {
    auto [a, b] = sys.gap(j);
    double x = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta);
    double s = sys.gap_sign(j) / std::sqrt(std::abs(sys.rest(x, 2 * j, 2 * j + 1)));
    return basis_values(basis, x) * s;
}

double wrap(double t) {
    t = std::fmod(t, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    return t;
}

}  // namespace

FirstKindBasis normalize_differentials(const IntervalSystem& sys) {
    FirstKindBasis out;
    const int g = sys.l() - 1;
    out.D.resize(g, g);
    if (g == 0) return out;
    // M(j, s) = int_{E_j} x^s / h; the alpha-period of z^s dz / sqrt(H) is -2 pi i M(j, s).
    Eigen::MatrixXd M(g, g);
    for (int j = 1; j <= g; ++j) {
        Eigen::VectorXd row = integrate_band(sys, j, [&](double x) {
            Eigen::VectorXd v(g);
            double p = 1.0;
            for (int s = 0; s < g; ++s, p *= x) v[s] = p;
            return v;
        });
        M.row(j - 1) = row.transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    out.condition = sv(0) / sv(g - 1);
    if (!(out.condition <= 1e12)) throw DomainError("normalize_differentials: alpha-period matrix is ill-conditioned");
    // D A^T = 2 pi i I with A = -2 pi i M
    out.D = -M.transpose().partialPivLu().inverse();
    for (int k = 0; k < g; ++k) {
        poly::Poly d(g);
        for (int c = 0; c < g; ++c) d[c] = out.D(k, c);
        out.d.push_back(d);
    }
    for (int k = 0; k < g; ++k) {
        for (int j = 1; j <= g; ++j) {
            double band = integrate_band(sys, j, [&](double x) { return poly::eval(out.d[k], x); });
            double period = -2.0 * kPi * band;  // imaginary part
            double target = (j - 1 == k) ? 2.0 * kPi : 0.0;
            out.alpha_residual = std::max(out.alpha_residual, std::abs(period - target));
        }
    }
    return out;
}

PeriodData period_matrix(const IntervalSystem& sys, const FirstKindBasis& basis) {
    PeriodData p;
    const int g = basis.genus();
    p.omega = harmonic_measures(sys);
    p.B.resize(g, g);
    p.Binv.resize(g, g);
    p.G.resize(g, g);
    p.u_inf.resize(g);
    if (g == 0) return p;
    for (int m = 1; m <= g; ++m) {
        Eigen::VectorXd row = integrate_gap(sys, m, [&](double x) { return basis_values(basis, x); });
        p.G.row(m - 1) = row.transpose();
    }
    for (int j = 0; j < g; ++j) p.B.row(j) = 2.0 * p.G.bottomRows(g - j).colwise().sum();
    p.symmetry_residual = (p.B - p.B.transpose()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (p.B + p.B.transpose()));
    p.max_eigenvalue = es.eigenvalues().maxCoeff();
    if (p.max_eigenvalue >= 0.0) throw InvariantError("period_matrix: B is not negative definite");
    p.Binv = p.B.inverse();
    const double top = sys.endpoints().back();
    for (int k = 0; k < g; ++k) {
        double tail = tail_integral(
            [&](double x) { return poly::eval(basis.d[k], x) / std::sqrt(sys.H(x)); }, top);
        p.u_inf[k] = -2.0 * tail;
    }
    Eigen::VectorXd w(g);
    for (int k = 0; k < g; ++k) w[k] = p.omega[k];
    p.identity_residual = (p.u_inf - p.B * w).cwiseAbs().maxCoeff();
    return p;
}

std::string period_report(const PeriodData& p) {
    std::ostringstream os;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    const auto g = p.B.rows();
    os << "genus " << g << "\n";
    os << "omega";
    for (double w : p.omega) os << " " << num(w);
    os << "\nB\n";
    for (Eigen::Index i = 0; i < g; ++i) {
        for (Eigen::Index j = 0; j < g; ++j) os << (j ? " " : "") << num(p.B(i, j));
        os << "\n";
    }
    os << "u_inf";
    for (Eigen::Index i = 0; i < g; ++i) os << " " << num(p.u_inf[i]);
    os << "\nsymmetry_residual " << num(p.symmetry_residual) << "\nmax_eigenvalue "
       << num(p.max_eigenvalue) << "\nidentity_residual " << num(p.identity_residual) << "\n";
    return os.str();
}

GapPoint canonical(const IntervalSystem& sys, GapPoint p) {
    if (p.gap < 1 || p.gap >= sys.l()) throw DomainError("gap point: gap index out of range");
    auto [a, b] = sys.gap(p.gap);
    if (p.x < a || p.x > b) throw DomainError("gap point: x outside the closed gap");
    if (p.sheet != 1 && p.sheet != -1) throw DomainError("gap point: sheet must be +1 or -1");
    if (p.x == a || p.x == b) p.sheet = 1;
    return p;
}

GapPoint gap_point_from_theta(const IntervalSystem& sys, int gap, double theta) {
    auto [a, b] = sys.gap(gap);
    double t = wrap(theta);
    GapPoint p{gap, 0.5 * (a + b) + 0.5 * (b - a) * std::cos(t), std::sin(t) < 0.0 ? -1 : 1};
    p.x = std::clamp(p.x, a, b);
    return canonical(sys, p);
}

double theta_of(const IntervalSystem& sys, const GapPoint& p) {
    auto [a, b] = sys.gap(p.gap);
    double x = std::clamp(p.x, a, b);
    double t = 2.0 * std::atan2(std::sqrt(b - x), std::sqrt(x - a));
    return p.sheet < 0 ? wrap(-t) : t;
}

Eigen::VectorXd abel_gap_integral(const IntervalSystem& sys, const FirstKindBasis& basis, const GapPoint& q) {
    GapPoint p = canonical(sys, q);
    auto [a, b] = sys.gap(p.gap);
    if (p.x == a) return Eigen::VectorXd::Zero(basis.genus());
    Eigen::VectorXd v = integrate_gap_part(sys, p.gap, [&](double x) { return basis_values(basis, x); }, a, p.x);
    return v * static_cast<double>(p.sheet);
}

Eigen::VectorXd abel_map(const IntervalSystem& sys, const FirstKindBasis& basis,
                         const std::vector<GapPoint>& pts) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.genus());
    for (const auto& p : pts) v += abel_gap_integral(sys, basis, p);
    return v;
}

Eigen::VectorXd real_point_integral(const IntervalSystem& sys, const FirstKindBasis& basis,
                                    const PeriodData& periods, double x) {
    const int g = basis.genus();
    Region r = sys.locate(x);
    const auto& a = sys.endpoints();
    auto gap_tail = [&](int from) {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(g);
        for (int m = from; m <= g; ++m) s += periods.G.row(m - 1).transpose();
        return s;
    };
    switch (r.kind) {
        case RegionKind::Band: throw DomainError("real_point_integral: x lies on E");
        case RegionKind::Gap: {
            int j = r.index;
            Eigen::VectorXd v =
                integrate_gap_part(sys, j, [&](double t) { return basis_values(basis, t); }, x, sys.gap(j).second);
            return v + gap_tail(j + 1);
        }
        case RegionKind::Right: {
            // x = a_{2l} + t^2
            const int n2 = static_cast<int>(a.size());
            Eigen::VectorXd v = legendre_integral(
                [&](double t) {
                    double xi = a.back() + t * t;
                    return Eigen::VectorXd(basis_values(basis, xi) * (2.0 / std::sqrt(sys.rest(xi, n2, 0))));
                },
                0.0, std::sqrt(x - a.back()));
            return -v;
        }
        case RegionKind::Left: {
            // x = a_1 - t^2; sqrt(H) = (-1)^l sqrt|H| there
            double sg = (sys.l() % 2 == 0) ? 1.0 : -1.0;
            Eigen::VectorXd v = legendre_integral(
                [&](double t) {
                    double xi = a.front() - t * t;
                    return Eigen::VectorXd(basis_values(basis, xi) * (2.0 / std::sqrt(std::abs(sys.rest(xi, 1, 0)))));
                },
                0.0, std::sqrt(a.front() - x));
            return sg * v + gap_tail(1);
        }
    }
    return Eigen::VectorXd::Zero(g);
}

Eigen::VectorXd loop_increment(const IntervalSystem& sys, const FirstKindBasis& basis, int gap) {
    if (gap < 1 || gap >= sys.l()) throw DomainError("loop_increment: gap index out of range");
    // dA/dtheta = -(density in the theta chart), continuous around the loop
    auto f = [&](double t) { return Eigen::VectorXd(-gap_density_theta(sys, basis, gap, t)); };
    Eigen::VectorXd upper = legendre_integral(f, 0.0, kPi);
    Eigen::VectorXd lower = legendre_integral(f, kPi, 2.0 * kPi);
    return upper + lower;
}

Reduced lattice_reduce(const Eigen::VectorXd& v, const Eigen::MatrixXd& B) {
    if (B.rows() != v.size() || B.cols() != v.size()) throw DomainError("lattice_reduce: dimension mismatch");
    Reduced r;
    r.lambda.resize(v.size());
    r.m.resize(v.size());
    if (v.size() == 0) return r;
    auto lu = B.fullPivLu();
    if (!lu.isInvertible()) throw DomainError("lattice_reduce: singular B");
    Eigen::VectorXd c = lu.solve(v);
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        double m = std::floor(c[i] + 0.5);
        r.m[i] = static_cast<int>(m);
        r.lambda[i] = c[i] - m;
    }
    return r;
}

Reduced lattice_reduce(const Eigen::VectorXd& v, const PeriodData& p) {
    Reduced r;
    const auto g = v.size();
    r.lambda.resize(g);
    r.m.resize(g);
    if (g == 0) return r;
    Eigen::VectorXd c = p.Binv * v;
    for (Eigen::Index i = 0; i < g; ++i) {
        double m = std::floor(c[i] + 0.5);
        r.m[i] = static_cast<int>(m);
        r.lambda[i] = c[i] - m;
    }
    return r;
}

InversionSolution solve_inversion(const IntervalSystem& sys, const FirstKindBasis& basis,
                                  const PeriodData& periods, const Eigen::VectorXd& v) {
    const int g = basis.genus();
    InversionSolution sol;
    sol.residual.resize(g);
    sol.lattice_shift.resize(g);
    if (g == 0) return sol;
    if (!v.allFinite()) throw DomainError("solve_inversion: target is not finite");

    auto abel_theta = [&](int j, double t) {
        return abel_gap_integral(sys, basis, gap_point_from_theta(sys, j, t));
    };
    // residual in v units after reduction
    auto residual = [&](const std::vector<Eigen::VectorXd>& parts) {
        Eigen::VectorXd s = -v;
        for (const auto& p : parts) s += p;
        return Eigen::VectorXd(periods.B * lattice_reduce(s, periods).lambda);
    };

    // coarse grid, offset away from the branch points
    const int K = 32;
    std::vector<std::vector<Eigen::VectorXd>> table(g);
    std::vector<double> grid(K);
    for (int i = 0; i < K; ++i) grid[i] = 2.0 * kPi * i / K + 1e-3;
    for (int j = 0; j < g; ++j)
        for (int i = 0; i < K; ++i) table[j].push_back(abel_theta(j + 1, grid[i]));
    std::vector<int> idx(g, 0), best_idx(g, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<Eigen::VectorXd> parts;
        for (int j = 0; j < g; ++j) parts.push_back(table[j][idx[j]]);
        Eigen::VectorXd s = -v;
        for (const auto& p : parts) s += p;
        double r = lattice_reduce(s, periods).lambda.cwiseAbs().maxCoeff();
        if (r < best) {
            best = r;
            best_idx = idx;
        }
        int c = 0;
        while (c < g && ++idx[c] == K) idx[c++] = 0;
        if (c == g) break;
    }
    std::vector<double> th(g);
    for (int j = 0; j < g; ++j) th[j] = grid[best_idx[j]];

    auto eval_parts = [&](const std::vector<double>& t) {
        std::vector<Eigen::VectorXd> parts;
        for (int j = 0; j < g; ++j) parts.push_back(abel_theta(j + 1, t[j]));
        return parts;
    };
    auto parts = eval_parts(th);
    Eigen::VectorXd r = residual(parts);
    const double h = 1e-6;
    int it = 0;
    for (; it < 50 && r.cwiseAbs().maxCoeff() > 1e-13; ++it) {
        Eigen::MatrixXd J(g, g);
        for (int j = 0; j < g; ++j) {
            Eigen::VectorXd shifted = abel_theta(j + 1, th[j] + h) - parts[j];
            J.col(j) = periods.B * lattice_reduce(shifted, periods).lambda / h;
        }
        Eigen::VectorXd step = J.partialPivLu().solve(r);
        double damp = 1.0, r0 = r.cwiseAbs().maxCoeff();
        bool accepted = false;
        for (int bt = 0; bt < 30; ++bt, damp *= 0.5) {
            std::vector<double> trial(g);
            for (int j = 0; j < g; ++j) trial[j] = wrap(th[j] - damp * step[j]);
            auto tparts = eval_parts(trial);
            Eigen::VectorXd tr = residual(tparts);
            if (tr.cwiseAbs().maxCoeff() < r0) {
                th = trial;
                parts = std::move(tparts);
                r = tr;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    sol.iterations = it;
    sol.theta = th;
    for (int j = 0; j < g; ++j) sol.points.push_back(gap_point_from_theta(sys, j + 1, th[j]));
    sol.residual = r;
    Eigen::VectorXd s = -v;
    for (const auto& p : parts) s += p;
    sol.lattice_shift = lattice_reduce(s, periods).m;
    if (r.cwiseAbs().maxCoeff() > 1e-8) {
        std::ostringstream os;
        os << "solve_inversion: residual " << r.cwiseAbs().maxCoeff() << " above 1e-8";
        throw InversionFailure(os.str(), sol);
    }
    return sol;
}

}  // namespace oz
