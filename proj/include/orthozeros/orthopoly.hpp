#pragma once

#include <memory>
#include <string>
#include <vector>

#include "orthozeros/geometry.hpp"
#include "orthozeros/poly.hpp"

namespace oz {

struct DiscretizedMeasure {
    std::vector<double> x, w;             // continuous part, all weights positive
    std::vector<double> mass_x, mass_w;   // point masses
    double total_mass = 0.0;
    int nodes_per_band = 0;
};

// Nodes of the cos-substituted Gauss-Chebyshev rule on each band carrying |R/(W h)|
// (side R) or |S/(W h)| (side S), plus point masses at rho roots with eps = -1.
DiscretizedMeasure discretize(const WeightSpec& spec, int nodes_per_band,
                              MeasureSide side = MeasureSide::R);

// Monic recurrence p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}, beta_0 = total mass.
struct Recurrence {
    std::vector<double> alpha, beta;
    int size() const { return static_cast<int>(alpha.size()); }
};

Recurrence stieltjes_recurrence(const DiscretizedMeasure& mu, int N);

// Orthonormal polynomial with positive leading coefficient.
double orthonormal_value(const Recurrence& rec, int n, double x);
double monic_value(const Recurrence& rec, int n, double x);
// max_{j<n} |<P_n, P_j>| in the discrete measure; for n = 0, |<P_0, P_0> - 1|.
double orthogonality_residual(const DiscretizedMeasure& mu, const Recurrence& rec, int n);

std::vector<double> polynomial_zeros(const Recurrence& rec, int n);

struct ZeroReport {
    int n = 0;
    std::vector<double> zeros;
    std::vector<int> band_counts;                        // size l
    std::vector<int> gap_occupancy;                      // size l-1
    std::vector<double> gap_zero_locations;              // NaN where empty
    std::vector<double> outside;                         // only with point masses off [a_1, a_2l]
};

ZeroReport count_zeros(const IntervalSystem& sys, const std::vector<double>& zeros);

struct PellData {
    int n = 0;
    int m = 0;                   // n + deg R - l
    poly::Poly g_hat;            // least-squares fit, ascending coefficients
    double leading = 0.0;        // leading coefficient of g_hat (1 in theory)
    double residual = 0.0;       // max |R P^2 - S Q^2 - 2 rho g| / scale on E
    std::vector<int> gap_root_counts;
    std::vector<double> x;       // zero of g_hat per gap
    std::vector<int> delta;      // sign in R P(x) = delta sqrt(H) Q(x)
    std::vector<double> sign_residual;
    std::shared_ptr<const Recurrence> rec_R, rec_S;

    double P(double t) const { return orthonormal_value(*rec_R, n, t); }
    double Q(double t) const { return orthonormal_value(*rec_S, m, t); }
};

// Discretizes both measures once and serves Pell data for any n up to n_max.
class PellSolver {
public:
    PellSolver(const WeightSpec& spec, int n_max, int nodes_per_band = 0);
    PellData at(int n) const;
    const Recurrence& recurrence_R() const { return *rec_R_; }
    const Recurrence& recurrence_S() const { return *rec_S_; }
    const DiscretizedMeasure& measure_R() const { return mu_R_; }

private:
    const WeightSpec& spec_;
    int n_max_;
    DiscretizedMeasure mu_R_, mu_S_;
    std::shared_ptr<Recurrence> rec_R_, rec_S_;
};

PellData pell_data(const WeightSpec& spec, int n);

struct InterlacingReport {
    bool ok = true;
    std::vector<std::string> violations;
};

InterlacingReport interlacing_check(const WeightSpec& spec, const PellData& pell);

}  // namespace oz
