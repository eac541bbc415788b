#include "orthozeros/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orthozeros/errors.hpp"
#include "orthozeros/quadrature.hpp"

namespace oz {

Surface::Surface(IntervalSystem s)
    : sys(std::move(s)), basis(normalize_differentials(sys)), periods(period_matrix(sys, basis)) {}

WeightTransform weight_transform(const Surface& s, const WeightSpec& spec) {
    const auto& sys = s.sys;
    const int g = s.genus();
    WeightTransform out;
    out.phi = Eigen::VectorXd::Zero(g);
    if (g == 0) return out;
    for (int k = 1; k <= sys.l(); ++k) {
        Eigen::VectorXd part = integrate_band(sys, k, [&](double x) {
            double lw = spec.log_abs_W(x);
            Eigen::VectorXd v(g);
            for (int c = 0; c < g; ++c) v[c] = poly::eval(s.basis.d[c], x) * lw;
            return v;
        });
        out.phi += part;
    }
    if (spec.is_bernstein_szego()) {
        const auto& roots = spec.bs().roots;
        bool all_real = std::all_of(roots.begin(), roots.end(), [](const BSRoot& r) { return r.w.imag() == 0.0; });
        if (all_real) {
            // -2 phi(rho) = sum_j nu_j (I_{w_j} - u_inf)
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g);
            for (const auto& r : roots)
                rhs += r.multiplicity *
                       (2.0 * real_point_integral(sys, s.basis, s.periods, r.w.real()) - s.periods.u_inf);
            out.identity_checked = true;
            out.identity_residual = (-2.0 * out.phi - rhs).cwiseAbs().maxCoeff();
        }
    }
    return out;
}

Eigen::VectorXd endpoint_root_counts(const WeightSpec& spec) {
    const int g = spec.system().l() - 1;
    Eigen::VectorXd z(g);
    for (int j = 1; j <= g; ++j) z[j - 1] = spec.R_roots_in_band(j);
    return z;
}

PredictionVector compute_V(const Surface& s, const WeightSpec& spec, const WeightTransform& phi, int n,
                           double epsilon) {
    if (n < 0) throw DomainError("compute_V: n must be nonnegative");
    const int g = s.genus();
    const int l = s.sys.l();
    PredictionVector pv;
    pv.n = n;
    pv.V.resize(g);
    pv.cell.resize(g);
    pv.counts.assign(l, 0);
    if (g == 0) {
        pv.counts[0] = n;
        return pv;
    }
    Eigen::VectorXd w(g);
    for (int j = 0; j < g; ++j) w[j] = s.periods.omega[j];
    double f = 2.0 * n + spec.deg_R() - l + 1;
    pv.V = f * w / 2.0 - s.periods.Binv * phi.phi - endpoint_root_counts(spec) / 2.0;
    for (int j = 0; j < g; ++j) {
        pv.counts[j] = static_cast<int>(std::floor(pv.V[j] + 0.5));
        double c = 2.0 * pv.V[j];
        pv.cell[j] = c - std::floor(c);
        if (pv.cell[j] < epsilon || pv.cell[j] > 1.0 - epsilon) pv.interior = false;
    }
    return pv;
}

GapForecast forecast_gaps(const Surface& s, const PredictionVector& pv) {
    GapForecast gf;
    gf.n = pv.n;
    const int g = s.genus();
    if (g == 0) return gf;
    Eigen::VectorXd target = s.periods.B * (pv.V + Eigen::VectorXd::Constant(g, 0.5));
    InversionSolution sol = solve_inversion(s.sys, s.basis, s.periods, target);
    for (const auto& p : sol.points) {
        gf.x.push_back(p.x);
        gf.delta.push_back(p.sheet);
        gf.occupancy.push_back((1 - p.sheet) / 2);
    }
    gf.residual = sol.residual.cwiseAbs().maxCoeff();
    return gf;
}

Prediction predict(const Surface& s, const WeightSpec& spec, const WeightTransform& phi, int n, double epsilon) {
    Prediction p;
    p.vec = compute_V(s, spec, phi, n, epsilon);
    p.gaps = forecast_gaps(s, p.vec);
    const int l = s.sys.l();
    if (l > 1) {
        int used = 0;
        for (int j = 0; j < l - 1; ++j) used += p.vec.counts[j] + p.gaps.occupancy[j];
        p.vec.counts[l - 1] = n - used;
    }
    return p;
}

namespace {

Eigen::VectorXd congruence_lambda(const Surface& s, const PredictionVector& pv, const std::vector<GapPoint>& pts,
                                  const std::vector<int>& band_counts) {
    const int g = s.genus();
    Eigen::VectorXd z(g);
    for (int j = 0; j < g; ++j) z[j] = band_counts[j];
    Eigen::VectorXd c = Eigen::VectorXd::Constant(g, 0.5) + pv.V - z -
                        s.periods.Binv * abel_map(s.sys, s.basis, pts);
    for (int j = 0; j < g; ++j) c[j] -= std::floor(c[j] + 0.5);
    return c;
}

}  // namespace

CongruenceReport verify_congruence(const Surface& s, const WeightSpec& spec, const WeightTransform& phi,
                             const PellData& pell, const std::vector<int>& band_counts) {
    CongruenceReport rep;
    rep.n = pell.n;
    const int g = s.genus();
    rep.lambda.resize(g);
    if (g == 0) return rep;
    if (static_cast<int>(band_counts.size()) < g) throw DomainError("verify_congruence: band counts missing");
    PredictionVector pv = compute_V(s, spec, phi, pell.n);
    std::vector<GapPoint> pts;
    for (int j = 0; j < g; ++j) pts.push_back(canonical(s.sys, {j + 1, pell.x[j], pell.delta[j]}));
    rep.lambda = congruence_lambda(s, pv, pts, band_counts);
    rep.defect = rep.lambda.cwiseAbs().maxCoeff();
    // control: flip the sheet of the point farthest from its gap ends
    double best = -1.0;
    for (int j = 0; j < g; ++j) {
        auto [a, b] = s.sys.gap(j + 1);
        double d = std::min(pts[j].x - a, b - pts[j].x) / (b - a);
        if (d > best) {
            best = d;
            rep.control_gap = j + 1;
        }
    }
    auto flipped = pts;
    flipped[rep.control_gap - 1].sheet = -flipped[rep.control_gap - 1].sheet;
    flipped[rep.control_gap - 1] = canonical(s.sys, flipped[rep.control_gap - 1]);
    rep.control_defect = congruence_lambda(s, pv, flipped, band_counts).cwiseAbs().maxCoeff();
    return rep;
}

namespace {

int oracle_nodes(int n_max) { return std::max(8 * (n_max + 2), 512); }

}  // namespace

ZeroOracle::ZeroOracle(const WeightSpec& spec, int n_max, int nodes_per_band)
    : spec_(spec),
      n_max_(n_max),
      mu_(discretize(spec, nodes_per_band > 0 ? nodes_per_band : oracle_nodes(n_max), MeasureSide::R)),
      rec_(stieltjes_recurrence(mu_, n_max + 2)) {}

ZeroReport ZeroOracle::zeros(int n) const {
    if (n < 0 || n > n_max_) throw DomainError("ZeroOracle: n out of range");
    return count_zeros(spec_.system(), polynomial_zeros(rec_, n));
}

double ZeroOracle::s_zero_ratio(int n) const {
    if (spec_.S_roots().empty()) return 1.0;
    double mx = 0.0;
    for (double x : mu_.x) mx = std::max(mx, std::abs(orthonormal_value(rec_, n, x)));
    double mn = std::numeric_limits<double>::infinity();
    for (double x : spec_.S_roots()) mn = std::min(mn, std::abs(orthonormal_value(rec_, n, x)));
    return mx > 0.0 ? mn / mx : 0.0;
}

Comparison compare(const Surface& s, const WeightSpec& spec, int n_min, int n_max, double epsilon,
                   double threshold) {
    if (n_min < 0 || n_max < n_min) throw DomainError("compare: bad n range");
    Comparison out;
    const int l = s.sys.l();
    const int g = s.genus();
    ZeroOracle oracle(spec, n_max);
    WeightTransform phi = weight_transform(s, spec);
    int count_match = 0, count_total = 0, occ_match = 0, occ_total = 0;
    int flagged_counts_ok = 0, flagged_occ_ok = 0;
    for (int n = n_min; n <= n_max; ++n) {
        ZeroReport zr = oracle.zeros(n);
        Prediction p = predict(s, spec, phi, n, epsilon);
        bool thr = oracle.s_zero_ratio(n) >= threshold;
        bool counts_ok = true, occ_ok = true;
        for (int j = 1; j <= g; ++j) {
            CompareRow row;
            row.n = n;
            row.j = j;
            row.actual = zr.band_counts[j - 1];
            row.predicted = p.vec.counts[j - 1];
            row.defect = std::abs(row.actual - row.predicted);
            row.occupancy_actual = zr.gap_occupancy[j - 1];
            row.occupancy_predicted = p.gaps.occupancy[j - 1];
            row.interior = p.vec.interior;
            row.threshold_ok = thr;
            out.summary.max_defect = std::max(out.summary.max_defect, row.defect);
            if (thr) out.summary.max_defect_thresholded = std::max(out.summary.max_defect_thresholded, row.defect);
            ++count_total;
            count_match += row.defect == 0;
            ++occ_total;
            occ_match += row.occupancy_actual == row.occupancy_predicted;
            counts_ok = counts_ok && row.defect == 0;
            occ_ok = occ_ok && row.occupancy_actual == row.occupancy_predicted;
            out.rows.push_back(row);
        }
        if (g == 0 && zr.band_counts[0] != n) counts_ok = false;
        if (l > 1 && zr.band_counts[l - 1] != p.vec.counts[l - 1]) counts_ok = false;
        if (p.vec.interior) {
            ++out.summary.flagged;
            flagged_counts_ok += counts_ok;
            flagged_occ_ok += occ_ok;
        }
        ++out.summary.n_count;
    }
    auto rate = [](int a, int b) { return b ? static_cast<double>(a) / b : 1.0; };
    out.summary.count_match_rate = rate(count_match, count_total);
    out.summary.occupancy_match_rate = rate(occ_match, occ_total);
    out.summary.flagged_count_match_rate = rate(flagged_counts_ok, out.summary.flagged);
    out.summary.flagged_occupancy_match_rate = rate(flagged_occ_ok, out.summary.flagged);
    return out;
}

std::string comparison_csv(const Comparison& c) {
    std::ostringstream os;
    os << "n,j,actual,predicted,defect,occupancy_actual,occupancy_predicted,interior_flag\n";
    for (const auto& r : c.rows)
        os << r.n << ',' << r.j << ',' << r.actual << ',' << r.predicted << ',' << r.defect << ','
           << r.occupancy_actual << ',' << r.occupancy_predicted << ',' << (r.interior ? 1 : 0) << '\n';
    return os.str();
}

PeriodicityReport rational_periodicity(const Surface& s, const WeightSpec& spec, int N, const std::vector<int>& k,
                                       int n_min, int n_max) {
    const int l = s.sys.l();
    const int g = s.genus();
    if (N < 1) throw DomainError("rational_periodicity: N must be positive");
    if (static_cast<int>(k.size()) != g) throw DomainError("rational_periodicity: need one k_j per gap");
    PeriodicityReport rep;
    std::vector<int> kk = k;
    int last = N;
    for (int v : k) last -= v;
    kk.push_back(last);
    ZeroOracle oracle(spec, n_max + N);
    WeightTransform phi = weight_transform(s, spec);
    for (int n = n_min; n <= n_max; ++n) {
        ZeroReport a = oracle.zeros(n), b = oracle.zeros(n + N);
        for (int j = 0; j < l; ++j) {
            if (b.band_counts[j] != a.band_counts[j] + kk[j]) {
                rep.counts_ok = false;
                std::ostringstream os;
                os << "n = " << n << ", band " << j + 1 << ": " << a.band_counts[j] << " -> " << b.band_counts[j];
                rep.failures.push_back(os.str());
            }
        }
        if (g == 0) continue;
        GapForecast fa = predict(s, spec, phi, n).gaps, fb = predict(s, spec, phi, n + N).gaps;
        for (int j = 0; j < g; ++j) {
            rep.max_forecast_shift = std::max(rep.max_forecast_shift, std::abs(fa.x[j] - fb.x[j]));
            if (fa.delta[j] != fb.delta[j] || std::abs(fa.x[j] - fb.x[j]) > 1e-8 * s.sys.span()) {
                rep.forecast_invariant = false;
                std::ostringstream os;
                os << "n = " << n << ", gap " << j + 1 << ": forecast changes";
                rep.failures.push_back(os.str());
            }
        }
    }
    return rep;
}

AccumulationReport accumulation_experiment(const Surface& s, const WeightSpec& spec, int n_max,
                                           const std::vector<std::vector<double>>& targets, int bins, int n_min) {
    const int g = s.genus();
    if (n_max < n_min || n_min < 0) throw DomainError("accumulation_experiment: bad n range");
    if (bins < 1) throw DomainError("accumulation_experiment: bins must be positive");
    AccumulationReport rep;
    rep.n_max = n_max;
    if (g == 0) return rep;
    ZeroOracle oracle(spec, n_max);
    WeightTransform phi = weight_transform(s, spec);
    rep.gaps.resize(g);
    for (int n = n_min; n <= n_max; ++n) {
        GapForecast f = predict(s, spec, phi, n).gaps;
        ZeroReport zr = oracle.zeros(n);
        for (int j = 0; j < g; ++j) {
            if (f.delta[j] == -1) rep.gaps[j].visited.push_back(f.x[j]);
            if (zr.gap_occupancy[j]) rep.gaps[j].actual.push_back(zr.gap_zero_locations[j]);
        }
    }
    for (int j = 0; j < g; ++j) {
        auto& h = rep.gaps[j];
        h.gap = j + 1;
        auto [a, b] = s.sys.gap(j + 1);
        std::sort(h.visited.begin(), h.visited.end());
        std::sort(h.actual.begin(), h.actual.end());
        double prev = a;
        for (double x : h.visited) {
            h.largest_unvisited = std::max(h.largest_unvisited, x - prev);
            prev = x;
        }
        h.largest_unvisited = std::max(h.largest_unvisited, b - prev);
        double tol = 1e-6 * (b - a);
        for (std::size_t i = 0; i < h.visited.size(); ++i)
            if (i == 0 || h.visited[i] - h.visited[i - 1] > tol) ++h.distinct_points;
        h.bin_counts.assign(bins, 0);
        for (int i = 0; i <= bins; ++i) h.bin_edges.push_back(a + (b - a) * i / bins);
        for (double x : h.visited) {
            int bi = std::clamp(static_cast<int>((x - a) / (b - a) * bins), 0, bins - 1);
            ++h.bin_counts[bi];
        }
        if (j < static_cast<int>(targets.size())) {
            for (double t : targets[j]) {
                double d = std::numeric_limits<double>::infinity();
                for (double x : h.visited) d = std::min(d, std::abs(x - t));
                h.target_distance.push_back(d);
            }
        }
    }
    return rep;
}

}  // namespace oz
