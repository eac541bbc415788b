#include "orthozeros/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "orthozeros/errors.hpp"

namespace oz {

DiscretizedMeasure discretize(const WeightSpec& spec, int nodes_per_band, MeasureSide side) {
    if (nodes_per_band < 8) throw DomainError("discretize: need at least 8 nodes per band");
    const auto& sys = spec.system();
    DiscretizedMeasure mu;
    mu.nodes_per_band = nodes_per_band;
    const int M = nodes_per_band;
    for (int k = 1; k <= sys.l(); ++k) {
        auto [a, b] = sys.band(k);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double sk = sys.band_sign(k);
        for (int i = 1; i <= M; ++i) {
            double x = mid + half * std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * M));
            // dx / h(x) = dtheta * sk / (pi sqrt|rest|)
            double base = sk / (std::numbers::pi * std::sqrt(std::abs(sys.rest(x, 2 * k - 1, 2 * k)))) *
                          (std::numbers::pi / M);
            double w = (side == MeasureSide::R ? spec.R(x) : -spec.S(x)) / spec.W(x) * base;
            if (!(w > 0.0) || !std::isfinite(w)) {
                std::ostringstream os;
                os << "discretize: density not positive at x = " << x << " (band " << k << ")";
                throw WeightError(os.str());
            }
            mu.x.push_back(x);
            mu.w.push_back(w);
        }
    }
    if (spec.is_bernstein_szego()) {
        poly::Poly drho = poly::derivative(spec.rho());
        for (const auto& r : spec.bs().roots) {
            if (r.eps != -1) continue;
            double w = r.w.real();
            double sH = sys.sqrt_H_real(w);
            double num = (side == MeasureSide::R) ? spec.R(w) : -spec.S(w);
            double m = 2.0 * num / (poly::eval(drho, w) * sH);
            if (!(m > 0.0) || !std::isfinite(m)) {
                std::ostringstream os;
                os << "discretize: point mass " << m << " at x = " << w << " is not positive";
                throw WeightError(os.str());
            }
            mu.mass_x.push_back(w);
            mu.mass_w.push_back(m);
        }
    }
    for (double w : mu.w) mu.total_mass += w;
    for (double w : mu.mass_w) mu.total_mass += w;
    return mu;
}

Recurrence stieltjes_recurrence(const DiscretizedMeasure& mu, int N) {
    if (N < 1) throw DomainError("stieltjes_recurrence: N must be positive");
    std::size_t npts = mu.x.size() + mu.mass_x.size();
    if (static_cast<std::size_t>(N) > npts)
        throw DomainError("stieltjes_recurrence: more polynomials requested than support points");
    Eigen::ArrayXd x(npts), w(npts);
    for (std::size_t i = 0; i < mu.x.size(); ++i) {
        x[i] = mu.x[i];
        w[i] = mu.w[i];
    }
    for (std::size_t i = 0; i < mu.mass_x.size(); ++i) {
        x[mu.x.size() + i] = mu.mass_x[i];
        w[mu.x.size() + i] = mu.mass_w[i];
    }
    Recurrence rec;
    rec.alpha.assign(N, 0.0);
    rec.beta.assign(N, 0.0);
    rec.beta[0] = w.sum();
    Eigen::ArrayXd sw = w.sqrt();
    // q_k = P_k(x) sqrt(w): orthonormal vectors
    Eigen::ArrayXd prev = Eigen::ArrayXd::Zero(npts);
    Eigen::ArrayXd cur = sw / std::sqrt(rec.beta[0]);
    for (int k = 0; k < N; ++k) {
        rec.alpha[k] = (x * cur * cur).sum();
        if (k + 1 == N) break;
        Eigen::ArrayXd nxt = (x - rec.alpha[k]) * cur - (k > 0 ? std::sqrt(rec.beta[k]) : 0.0) * prev;
        double b = nxt.square().sum();
        if (!(b > 0.0) || !std::isfinite(b))
            throw ConvergenceError("stieltjes_recurrence: breakdown at degree " + std::to_string(k + 1));
        rec.beta[k + 1] = b;
        prev = cur;
        cur = nxt / std::sqrt(b);
    }
    return rec;
}

double orthonormal_value(const Recurrence& rec, int n, double x) {
    if (n < 0) throw DomainError("orthonormal_value: negative degree");
    if (n >= rec.size()) throw DomainError("orthonormal_value: degree exceeds recurrence length");
    double prev = 0.0, cur = 1.0 / std::sqrt(rec.beta[0]);
    for (int k = 0; k < n; ++k) {
        double nxt = ((x - rec.alpha[k]) * cur - (k > 0 ? std::sqrt(rec.beta[k]) : 0.0) * prev) /
                     std::sqrt(rec.beta[k + 1]);
        prev = cur;
        cur = nxt;
    }
    return cur;
}

double monic_value(const Recurrence& rec, int n, double x) {
    if (n < 0) throw DomainError("monic_value: negative degree");
    if (n > rec.size()) throw DomainError("monic_value: degree exceeds recurrence length");
    double prev = 0.0, cur = 1.0;
    for (int k = 0; k < n; ++k) {
        double nxt = (x - rec.alpha[k]) * cur - (k > 0 ? rec.beta[k] : 0.0) * prev;
        prev = cur;
        cur = nxt;
    }
    return cur;
}

double orthogonality_residual(const DiscretizedMeasure& mu, const Recurrence& rec, int n) {
    if (n < 0 || n >= rec.size()) throw DomainError("orthogonality_residual: degree out of range");
    std::vector<double> xs = mu.x, ws = mu.w;
    xs.insert(xs.end(), mu.mass_x.begin(), mu.mass_x.end());
    ws.insert(ws.end(), mu.mass_w.begin(), mu.mass_w.end());
    const auto npts = static_cast<Eigen::Index>(xs.size());
    Eigen::ArrayXd x = Eigen::Map<Eigen::ArrayXd>(xs.data(), npts);
    Eigen::ArrayXd w = Eigen::Map<Eigen::ArrayXd>(ws.data(), npts);
    Eigen::MatrixXd P(npts, n + 1);
    Eigen::ArrayXd prev = Eigen::ArrayXd::Zero(npts);
    Eigen::ArrayXd cur = Eigen::ArrayXd::Constant(npts, 1.0 / std::sqrt(rec.beta[0]));
    P.col(0) = cur.matrix();
    for (int k = 0; k < n; ++k) {
        Eigen::ArrayXd nxt = ((x - rec.alpha[k]) * cur - (k > 0 ? std::sqrt(rec.beta[k]) : 0.0) * prev) /
                             std::sqrt(rec.beta[k + 1]);
        prev = cur;
        cur = nxt;
        P.col(k + 1) = cur.matrix();
    }
    Eigen::VectorXd g = P.leftCols(n).transpose() * (w * cur).matrix();
    return n ? g.cwiseAbs().maxCoeff() : std::abs((w * cur * cur).sum() - 1.0);
}

std::vector<double> polynomial_zeros(const Recurrence& rec, int n) {
    if (n < 0 || n > rec.size()) throw DomainError("polynomial_zeros: degree out of range");
    if (n == 0) return {};
    Eigen::VectorXd d(n), e(std::max(0, n - 1));
    for (int i = 0; i < n; ++i) d[i] = rec.alpha[i];
    for (int i = 0; i + 1 < n; ++i) e[i] = std::sqrt(rec.beta[i + 1]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("polynomial_zeros: eigenvalue solver failed");
    std::vector<double> z(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(z.begin(), z.end());
    return z;
}

ZeroReport count_zeros(const IntervalSystem& sys, const std::vector<double>& zeros) {
    ZeroReport rep;
    rep.n = static_cast<int>(zeros.size());
    rep.zeros = zeros;
    rep.band_counts.assign(sys.l(), 0);
    rep.gap_occupancy.assign(sys.l() - 1, 0);
    rep.gap_zero_locations.assign(sys.l() - 1, std::numeric_limits<double>::quiet_NaN());
    double tol = 1e-10 * sys.span();
    for (double z : zeros) {
        Region r = sys.locate(z, tol);
        switch (r.kind) {
            case RegionKind::Band: ++rep.band_counts[r.index - 1]; break;
            case RegionKind::Gap:
                if (++rep.gap_occupancy[r.index - 1] > 1) {
                    std::ostringstream os;
                    os << "count_zeros: two zeros in gap " << r.index;
                    throw InvariantError(os.str());
                }
                rep.gap_zero_locations[r.index - 1] = z;
                break;
            default: rep.outside.push_back(z); break;
        }
    }
    return rep;
}

namespace {

// Chebyshev basis on [a, b] as monomial polynomials in x.
std::vector<poly::Poly> chebyshev_basis(double a, double b, int deg) {
    std::vector<poly::Poly> T;
    poly::Poly t = {-(a + b) / (b - a), 2.0 / (b - a)};
    T.push_back({1.0});
    if (deg >= 1) T.push_back(t);
    for (int k = 2; k <= deg; ++k)
        T.push_back(poly::add(poly::scale(poly::multiply(t, T[k - 1]), 2.0), poly::scale(T[k - 2], -1.0)));
    return T;
}

PellData build_pell(const WeightSpec& spec, int n, std::shared_ptr<const Recurrence> rR,
                    std::shared_ptr<const Recurrence> rS) {
    const auto& sys = spec.system();
    const int l = sys.l();
    PellData pd;
    pd.n = n;
    pd.m = n + spec.deg_R() - l;
    if (pd.m < 0) throw DomainError("pell_data: n + deg R - l must be nonnegative");
    if (2 * n + spec.deg_R() < spec.nu() + l - 1)
        throw DomainError("pell_data: n below the Bernstein-Szego threshold");
    pd.rec_R = std::move(rR);
    pd.rec_S = std::move(rS);
    if (n >= pd.rec_R->size() || pd.m >= pd.rec_S->size())
        throw DomainError("pell_data: degree exceeds the solver range");

    // (R P^2 - S Q^2) / (2 rho) sampled on the bands, fitted by a degree l-1 polynomial.
    const int K = std::max(64, 8 * l);
    std::vector<double> xs, ys, scale_at;
    for (int k = 1; k <= l; ++k) {
        auto [a, b] = sys.band(k);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 1; i <= K; ++i) {
            double x = mid + half * std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * K));
            double p = pd.P(x), q = pd.Q(x);
            double rp = spec.R(x) * p * p, sq = spec.S(x) * q * q;
            double r2 = 2.0 * poly::eval(spec.rho(), x);
            xs.push_back(x);
            ys.push_back((rp - sq) / r2);
            scale_at.push_back((std::abs(rp) + std::abs(sq)) / std::abs(r2));
        }
    }
    auto T = chebyshev_basis(sys.a(1), sys.a(2 * l), l - 1);
    Eigen::MatrixXd A(xs.size(), l);
    Eigen::VectorXd y(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (int c = 0; c < l; ++c) A(i, c) = poly::eval(T[c], xs[i]);
        y[i] = ys[i];
    }
    Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
    poly::Poly g = {0.0};
    for (int c = 0; c < l; ++c) g = poly::add(g, poly::scale(T[c], coef[c]));
    g.resize(l, 0.0);
    pd.g_hat = g;
    pd.leading = g.back();
    double scale = *std::max_element(scale_at.begin(), scale_at.end());
    double res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) res = std::max(res, std::abs(ys[i] - poly::eval(g, xs[i])));
    pd.residual = res / scale;

    // one root of g_hat per closed gap
    pd.gap_root_counts.assign(l - 1, 0);
    pd.x.assign(l - 1, std::numeric_limits<double>::quiet_NaN());
    pd.delta.assign(l - 1, 0);
    pd.sign_residual.assign(l - 1, std::numeric_limits<double>::quiet_NaN());
    double gscale = 0.0;
    for (double c : g) gscale = std::max(gscale, std::abs(c));
    const double zero_tol = 1e-12 * std::max(gscale, 1.0);
    for (int j = 1; j < l; ++j) {
        auto [a, b] = sys.gap(j);
        const int G = 256;
        std::vector<double> roots;
        double xa = a, va = poly::eval(g, a);
        if (std::abs(va) <= zero_tol) roots.push_back(a);
        for (int i = 1; i <= G; ++i) {
            double xb = a + (b - a) * i / G, vb = poly::eval(g, xb);
            if (std::abs(vb) <= zero_tol) {
                if (roots.empty() || std::abs(roots.back() - xb) > 1e-12 * sys.span()) roots.push_back(xb);
            } else if (std::abs(va) > zero_tol && (va < 0.0) != (vb < 0.0)) {
                double lo = xa, hi = xb, flo = va;
                for (int it = 0; it < 200 && hi - lo > 1e-16 * sys.span(); ++it) {
                    double mid = 0.5 * (lo + hi), fm = poly::eval(g, mid);
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                roots.push_back(0.5 * (lo + hi));
            }
            xa = xb;
            va = vb;
        }
        pd.gap_root_counts[j - 1] = static_cast<int>(roots.size());
        if (roots.empty()) {
            std::ostringstream os;
            os << "pell_data: g_hat has no root in gap " << j << " at n = " << n;
            throw InvariantError(os.str());
        }
        double xj = roots.front();
        pd.x[j - 1] = xj;
        double rp = spec.R(xj) * pd.P(xj);
        double sq = std::abs(sys.H(xj)) > 0.0 ? sys.sqrt_H_real(xj) * pd.Q(xj) : 0.0;
        if (sq == 0.0) {
            pd.delta[j - 1] = 1;
            pd.sign_residual[j - 1] = std::abs(rp);
        } else {
            pd.delta[j - 1] = (rp / sq < 0.0) ? -1 : 1;
            double mag = std::max({std::abs(rp), std::abs(sq), 1e-300});
            pd.sign_residual[j - 1] = std::abs(rp - pd.delta[j - 1] * sq) / mag;
        }
    }
    return pd;
}

int default_nodes(int N) { return std::max(8 * N, 512); }

}  // namespace

PellSolver::PellSolver(const WeightSpec& spec, int n_max, int nodes_per_band) : spec_(spec), n_max_(n_max) {
    if (!spec.is_bernstein_szego()) throw DomainError("PellSolver: weight must be of Bernstein-Szego type");
    if (n_max < 0) throw DomainError("PellSolver: n_max must be nonnegative");
    int N = n_max + 2;
    int M = nodes_per_band > 0 ? nodes_per_band : default_nodes(N);
    if (M < 8 * N / 2) throw DomainError("PellSolver: too few nodes per band for n_max");
    mu_R_ = discretize(spec, M, MeasureSide::R);
    mu_S_ = discretize(spec, M, MeasureSide::S);
    rec_R_ = std::make_shared<Recurrence>(stieltjes_recurrence(mu_R_, N));
    int NS = std::max(1, n_max + spec.deg_R() - spec.system().l() + 2);
    rec_S_ = std::make_shared<Recurrence>(stieltjes_recurrence(mu_S_, NS));
}

PellData PellSolver::at(int n) const {
    if (n > n_max_) throw DomainError("PellSolver::at: n exceeds n_max");
    return build_pell(spec_, n, rec_R_, rec_S_);
}

PellData pell_data(const WeightSpec& spec, int n) { return PellSolver(spec, n).at(n); }

InterlacingReport interlacing_check(const WeightSpec& spec, const PellData& pell) {
    const auto& sys = spec.system();
    InterlacingReport rep;
    auto zp = polynomial_zeros(*pell.rec_R, pell.n);
    auto zq = polynomial_zeros(*pell.rec_S, pell.m);
    auto cp = count_zeros(sys, zp), cq = count_zeros(sys, zq);
    for (int j = 1; j < sys.l(); ++j) {
        if (cp.gap_occupancy[j - 1] != cq.gap_occupancy[j - 1]) {
            std::ostringstream os;
            os << "gap " << j << ": P has " << cp.gap_occupancy[j - 1] << " zeros, Q has "
               << cq.gap_occupancy[j - 1];
            rep.violations.push_back(os.str());
        }
    }
    double tol = 1e-10 * sys.span();
    for (int k = 1; k <= sys.l(); ++k) {
        auto [a, b] = sys.band(k);
        std::vector<std::pair<double, int>> pts;  // 0: zero of R P, 1: zero of S Q
        for (double e : {a, b}) pts.push_back({e, spec.R_has(e) ? 0 : 1});
        for (double z : zp)
            if (sys.locate(z, tol).kind == RegionKind::Band && sys.locate(z, tol).index == k) pts.push_back({z, 0});
        for (double z : zq)
            if (sys.locate(z, tol).kind == RegionKind::Band && sys.locate(z, tol).index == k) pts.push_back({z, 1});
        std::sort(pts.begin(), pts.end());
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (pts[i].second == pts[i - 1].second || pts[i].first - pts[i - 1].first <= tol) {
                std::ostringstream os;
                os << "band " << k << ": no strict interlacing near x = " << pts[i].first;
                rep.violations.push_back(os.str());
                break;
            }
        }
    }
    rep.ok = rep.violations.empty();
    return rep;
}

}  // namespace oz
