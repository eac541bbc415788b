// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "orthozeros/greens.hpp"
#include "orthozeros/orthopoly.hpp"
#include "orthozeros/predictor.hpp"
#include "orthozeros/surface.hpp"

using namespace oz;
using std::numbers::pi;

namespace {

int failures = 0;
std::map<int, std::string> lines;

void report(int id, bool ok, const std::string& detail) {
    char head[32];
    std::snprintf(head, sizeof head, "criterion %2d: %s  ", id, ok ? "PASS" : "FAIL");
    lines[id] = head + detail;
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::vector<IntervalSystem> random_systems(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick_l(1, 4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<IntervalSystem> out;
    while (static_cast<int>(out.size()) < count) {
        int l = out.size() < 4 ? static_cast<int>(out.size()) + 1 : pick_l(rng);
        std::vector<double> a(2 * l);
        for (auto& x : a) x = u(rng);
        std::sort(a.begin(), a.end());
        bool ok = true;
        for (int i = 1; i < 2 * l; ++i) ok = ok && a[i] - a[i - 1] > 0.05;
        if (ok) out.emplace_back(a);
    }
    return out;
}

struct Case {
    std::string name;
    std::unique_ptr<WeightSpec> spec;
    bool r_equals_h = false;
};

BernsteinSzegoWeight bs_real(double w) {
    BernsteinSzegoWeight b;
    b.roots.push_back({cplx(w, 0.0), 1, 1});
    return b;
}

BernsteinSzegoWeight bs_pair(cplx w) {
    BernsteinSzegoWeight b;
    b.roots.push_back({w, 1, 1});
    return b;
}

std::vector<Case> bs_cases() {
    IntervalSystem s2({-1.0, -0.7, -0.1, 1.0});
    IntervalSystem s3({-1.0, -0.6, -0.2, 0.3, 0.7, 1.0});
    std::vector<Case> c;
    auto add = [&](std::string name, const IntervalSystem& s, std::vector<double> R, BernsteinSzegoWeight w) {
        c.push_back({std::move(name), std::make_unique<WeightSpec>(s, std::move(R), std::move(w)), false});
    };
    add("l=2 rho=1", s2, {-0.1}, BernsteinSzegoWeight{});
    add("l=2 rho gap zero", s2, {}, bs_real(-0.4));
    add("l=2 rho pair", s2, {-0.1}, bs_pair(cplx(0.2, 0.5)));
    add("l=3 rho=1", s3, {-0.2, 0.7}, BernsteinSzegoWeight{});
    add("l=3 rho gap zero", s3, {0.7}, bs_real(-0.4));
    add("l=3 rho pair", s3, {-0.2, 0.7}, bs_pair(cplx(0.1, 0.3)));
    return c;
}

std::vector<Case> rh_cases() {
    std::vector<Case> c;
    auto add = [&](std::string name, std::vector<double> a, std::function<double(double)> W) {
        IntervalSystem s(a);
        c.push_back({std::move(name), std::make_unique<WeightSpec>(s, a, SmoothWeight{std::move(W)}), true});
    };
    add("symmetric W=1", {-1.0, -0.5, 0.5, 1.0}, [](double) { return 1.0; });
    add("l=2 W=exp(0.3x)", {-1.0, -0.7, -0.1, 1.0}, [](double x) { return std::exp(0.3 * x); });
    add("l=2 W=1.5+x^2", {-1.0, -0.2, 0.1, 0.9}, [](double x) { return 1.5 + x * x; });
    add("l=3 W=2+x", {-1.0, -0.6, -0.2, 0.3, 0.7, 1.0}, [](double x) { return 2.0 + x; });
    add("l=3 W=exp(-x^2)", {-1.0, -0.4, 0.0, 0.5, 0.8, 1.0}, [](double x) { return std::exp(-x * x); });
    return c;
}

void criterion1() {
    IntervalSystem s({-1.0, 1.0});
    double phi_err = std::abs(std::abs(green_phi_inf(s, cplx(2.0, 0.0))) - (2.0 + std::sqrt(3.0)));
    WeightSpec w(s, {}, BernsteinSzegoWeight{});
    PellSolver ps(w, 50);
    const Recurrence& r = ps.recurrence_R();
    double rec_err = std::abs(r.beta[0] - 1.0) + std::abs(r.beta[1] - 0.5);
    for (int k = 0; k <= 50; ++k) rec_err = std::max(rec_err, std::abs(r.alpha[k]));
    for (int k = 2; k <= 50; ++k) rec_err = std::max(rec_err, std::abs(r.beta[k] - 0.25));
    double zero_err = 0.0, pell_err = 0.0;
    for (int n = 1; n <= 50; ++n) {
        auto z = polynomial_zeros(r, n);
        for (int k = 1; k <= n; ++k)
            zero_err = std::max(zero_err, std::abs(z[n - k] - std::cos((2.0 * k - 1.0) * pi / (2.0 * n))));
        PellData pd = ps.at(n);
        for (int i = 0; i <= 400; ++i) {
            double x = -1.5 + 3.0 * i / 400;
            double P = pd.P(x), Q = pd.Q(x);
            pell_err = std::max(pell_err, std::abs(P * P - (x * x - 1.0) * Q * Q - 2.0) /
                                              std::max(1.0, std::abs(P * P)));
        }
    }
    bool ok = phi_err <= 1e-10 && rec_err <= 1e-10 && zero_err <= 1e-10 && pell_err <= 1e-10;
    report(1, ok,
           fmt("|phi(2)| err %.2e", phi_err) + fmt(", recurrence err %.2e", rec_err) +
               fmt(", zero err %.2e", zero_err) + fmt(", Pell rel. residual %.2e (n<=50)", pell_err));
}

void criterion2_3(const std::vector<IntervalSystem>& systems) {
    IntervalSystem sym({-1.0, -0.5, 0.5, 1.0});
    auto w = harmonic_measures(sym);
    double sym_err = std::max(std::abs(w[0] - 0.5), std::abs(w[1] - 0.5));
    double sum_err = 0.0;
    double sym_B = 0.0, ident = 0.0, max_eig = -1e300;
    int l_max = 0;
    for (const auto& s : systems) {
        auto om = harmonic_measures(s);
        double sum = 0.0;
        for (double x : om) sum += x;
        sum_err = std::max(sum_err, std::abs(sum - 1.0));
        l_max = std::max(l_max, s.l());
        if (s.l() < 2) continue;
        FirstKindBasis b = normalize_differentials(s);
        PeriodData p = period_matrix(s, b);
        sym_B = std::max(sym_B, p.symmetry_residual);
        ident = std::max(ident, p.identity_residual);
        max_eig = std::max(max_eig, p.max_eigenvalue);
    }
    report(2, sym_err <= 1e-9 && sum_err <= 1e-10,
           fmt("symmetric omega err %.2e", sym_err) + fmt(", max |sum omega - 1| %.2e", sum_err) + " over " +
               std::to_string(systems.size()) + " systems, l <= " + std::to_string(l_max));
    report(3, sym_B <= 1e-8 && max_eig < 0.0 && ident <= 1e-7,
           fmt("max |B - B^T| %.2e", sym_B) + fmt(", max eigenvalue %.3g", max_eig) +
               fmt(", max |u_inf - B omega| %.2e", ident));
}

void criterion4() {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
    double worst = 0.0, mono = 0.0;
    int trials = 0;
    for (auto e : {std::vector<double>{-1.0, -0.7, -0.1, 1.0}, std::vector<double>{-1.0, -0.6, -0.2, 0.3, 0.7, 1.0}}) {
        IntervalSystem s(e);
        FirstKindBasis b = normalize_differentials(s);
        PeriodData p = period_matrix(s, b);
        const int g = b.genus();
        for (int t = 0; t < 25; ++t, ++trials) {
            std::vector<GapPoint> pts;
            for (int j = 1; j <= g; ++j) pts.push_back(gap_point_from_theta(s, j, u(rng)));
            Eigen::VectorXd v = abel_map(s, b, pts);
            InversionSolution sol = solve_inversion(s, b, p, v);
            for (int j = 0; j < g; ++j) {
                double d = std::abs(theta_of(s, pts[j]) - sol.theta[j]);
                d = std::min(d, 2.0 * pi - d);
                worst = std::max(worst, d);
            }
        }
        for (int j = 1; j <= g; ++j) {
            Eigen::VectorXd c = p.Binv * loop_increment(s, b, j);
            // gap j loop: minus (column j - column j+1); the last gap gives minus its column
            Eigen::VectorXd expect = Eigen::VectorXd::Zero(g);
            expect[j - 1] = -1.0;
            if (j < g) expect[j] = 1.0;
            mono = std::max(mono, (c - expect).cwiseAbs().maxCoeff());
        }
    }
    report(4, worst <= 1e-7 && mono <= 1e-8,
           fmt("max round-trip error %.2e rad", worst) + " over " + std::to_string(trials) + " targets" +
               fmt(", loop monodromy vs lattice vector %.2e", mono));
}

void criterion5_6(const std::vector<Case>& cases) {
    double worst_res = 0.0, worst_def = 0.0, weakest_control = 1e300;
    bool roots_ok = true;
    for (const auto& c : cases) {
        const WeightSpec& w = *c.spec;
        Surface s(w.system());
        WeightTransform phi = weight_transform(s, w);
        PellSolver ps(w, 40);
        ZeroOracle zo(w, 40);
        double best_dist = -1.0, control = 0.0;
        for (int n = 10; n <= 40; ++n) {
            PellData pd = ps.at(n);
            worst_res = std::max(worst_res, pd.residual);
            for (int k : pd.gap_root_counts) roots_ok = roots_ok && k == 1;
            CongruenceReport r = verify_congruence(s, w, phi, pd, zo.zeros(n).band_counts);
            worst_def = std::max(worst_def, r.defect);
            auto [a, b] = s.sys.gap(r.control_gap);
            double x = pd.x[r.control_gap - 1];
            double dist = std::min(x - a, b - x) / (b - a);
            if (dist > best_dist) {
                best_dist = dist;
                control = r.control_defect;
            }
        }
        weakest_control = std::min(weakest_control, control);
    }
    report(5, worst_res <= 1e-6 && roots_ok,
           fmt("max Pell relative residual %.2e", worst_res) + " over " + std::to_string(cases.size()) +
               " cases x n=10..40, one root per gap: " + (roots_ok ? "yes" : "no"));
    report(6, worst_def <= 1e-6 && weakest_control > 1e-2,
           fmt("max congruence defect %.2e", worst_def) + fmt(", weakest sheet-flip control %.3g", weakest_control));
}

void criterion7_8_11(const std::vector<Case>& bs, const std::vector<Case>& rh) {
    int max_def_rh = 0, max_def_bs = 0;
    double worst_flag_count = 1.0, worst_flag_occ = 1.0, worst_occ = 1.0, faber = 0.0;
    std::string detail8;
    for (const auto* group : {&rh, &bs}) {
        for (const auto& c : *group) {
            const WeightSpec& w = *c.spec;
            Surface s(w.system());
            Comparison cmp = compare(s, w, 20, 200);
            const auto& sm = cmp.summary;
            if (c.r_equals_h)
                max_def_rh = std::max(max_def_rh, sm.max_defect);
            else
                max_def_bs = std::max(max_def_bs, sm.max_defect_thresholded);
            worst_flag_count = std::min(worst_flag_count, sm.flagged_count_match_rate);
            worst_flag_occ = std::min(worst_flag_occ, sm.flagged_occupancy_match_rate);
            worst_occ = std::min(worst_occ, sm.occupancy_match_rate);
            char buf[200];
            std::snprintf(buf, sizeof buf, "\n      %-18s flagged %3d, counts %.3f, occupancy %.3f, all-n occupancy %.3f",
                          c.name.c_str(), sm.flagged, sm.flagged_count_match_rate, sm.flagged_occupancy_match_rate,
                          sm.occupancy_match_rate);
            detail8 += buf;

            ZeroOracle zo(w, 400);
            ZeroReport z = zo.zeros(400);
            for (int j = 0; j < s.sys.l(); ++j)
                faber = std::max(faber, std::abs(z.band_counts[j] / 400.0 - s.periods.omega[j]));
        }
    }
    report(7, max_def_rh <= 1 && max_def_bs <= 1,
           "max defect " + std::to_string(max_def_rh) + " on " + std::to_string(rh.size()) +
               " systems with R=H, " + std::to_string(max_def_bs) + " on " + std::to_string(bs.size()) +
               " systems with R!=H (threshold 1e-3), n=20..200");
    report(8, worst_flag_count == 1.0 && worst_flag_occ == 1.0 && worst_occ >= 0.95,
           fmt("min flagged count match %.3f", worst_flag_count) + fmt(", min flagged occupancy match %.3f", worst_flag_occ) +
               fmt(", min all-n occupancy match %.3f", worst_occ) + detail8);
    report(11, faber <= 0.02, fmt("max |#Z/n - omega_j| at n=400: %.4f", faber) + " over " +
                                  std::to_string(rh.size() + bs.size()) + " systems");
}

void criterion9(const Case& sym) {
    const WeightSpec& w = *sym.spec;
    Surface s(w.system());
    PeriodicityReport pr = rational_periodicity(s, w, 2, {1}, 20, 200);
    AccumulationReport ar = accumulation_experiment(s, w, 200);
    int distinct = ar.gaps[0].distinct_points;
    report(9, pr.counts_ok && distinct == 1 && distinct <= 4,
           std::string("counts +1 per band every 2 steps: ") + (pr.counts_ok ? "yes" : "no") +
               ", distinct accumulation points " + std::to_string(distinct) + " (bound 4)");
}

void criterion10() {
    IntervalSystem sys({-1.0, -0.7, -0.1, 1.0});
    WeightSpec w(sys, {-1.0, -0.7, -0.1, 1.0}, SmoothWeight{[](double) { return 1.0; }});
    Surface s(sys);
    std::vector<double> gaps;
    for (int n_max : {100, 200, 400}) gaps.push_back(accumulation_experiment(s, w, n_max).gaps[0].largest_unvisited);
    bool ok = gaps[1] < gaps[0] && gaps[2] < gaps[1];
    report(10, ok,
           fmt("largest unvisited sub-interval %.4g", gaps[0]) + fmt(" -> %.4g", gaps[1]) + fmt(" -> %.4g", gaps[2]) +
               " for n_max 100, 200, 400");
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<IntervalSystem> systems = random_systems(20, 11);
    std::vector<Case> bs = bs_cases();
    std::vector<Case> rh = rh_cases();

    criterion1();
    criterion2_3(systems);
    criterion4();
    criterion5_6(bs);
    criterion7_8_11(bs, rh);
    criterion9(rh[0]);
    criterion10();

    for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d of 11 criteria failed (%.1f s)\n", failures, secs);
    return failures == 0 ? 0 : 1;
}
