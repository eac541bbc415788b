#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orthozeros/errors.hpp"
#include "orthozeros/geometry.hpp"
#include "orthozeros/poly.hpp"

namespace oz {

// phi_k = d_k(z) dz / sqrt(H), d_k = sum_s D(k, s) z^s, s = 0..l-2.
struct FirstKindBasis {
    Eigen::MatrixXd D;
    std::vector<poly::Poly> d;
    double alpha_residual = 0.0;  // max |alpha-period - 2 pi i delta|
    double condition = 1.0;
    int genus() const { return static_cast<int>(d.size()); }
};

FirstKindBasis normalize_differentials(const IntervalSystem& sys);

struct PeriodData {
    Eigen::MatrixXd B, Binv;
    Eigen::MatrixXd G;            // G(m, k) = int_{gap m} d_k / sqrt(H)
    Eigen::VectorXd u_inf;
    std::vector<double> omega;    // all l harmonic measures
    double symmetry_residual = 0.0;
    double max_eigenvalue = 0.0;  // negative for a valid B
    double identity_residual = 0.0;  // |u_inf - B omega|
};

PeriodData period_matrix(const IntervalSystem& sys, const FirstKindBasis& basis);

// Plain-text report with every entry at 17 significant digits.
std::string period_report(const PeriodData& p);

struct GapPoint {
    int gap = 1;
    double x = 0.0;
    int sheet = 1;
};

GapPoint canonical(const IntervalSystem& sys, GapPoint p);
GapPoint gap_point_from_theta(const IntervalSystem& sys, int gap, double theta);
double theta_of(const IntervalSystem& sys, const GapPoint& p);

// sheet * int_{a_{2j}}^x d_k / sqrt(H), real gap branch.
Eigen::VectorXd abel_gap_integral(const IntervalSystem& sys, const FirstKindBasis& basis, const GapPoint& p);
Eigen::VectorXd abel_map(const IntervalSystem& sys, const FirstKindBasis& basis,
                         const std::vector<GapPoint>& pts);

// Real part of int_x^{a_{2l}} d_k / sqrt(H) along the upper rim, for real x off E.
Eigen::VectorXd real_point_integral(const IntervalSystem& sys, const FirstKindBasis& basis,
                                    const PeriodData& periods, double x);

// Increment of the Abel integral of one gap point moved once around its loop.
Eigen::VectorXd loop_increment(const IntervalSystem& sys, const FirstKindBasis& basis, int gap);

struct Reduced {
    Eigen::VectorXd lambda;  // in [-1/2, 1/2)
    Eigen::VectorXi m;
};

Reduced lattice_reduce(const Eigen::VectorXd& v, const Eigen::MatrixXd& B);
Reduced lattice_reduce(const Eigen::VectorXd& v, const PeriodData& p);

struct InversionSolution {
    std::vector<GapPoint> points;
    std::vector<double> theta;
    Eigen::VectorXd residual;
    Eigen::VectorXi lattice_shift;
    int iterations = 0;
};

// Non-convergence; carries the best candidate found.
struct InversionFailure : ConvergenceError {
    InversionFailure(const std::string& what, InversionSolution best)
        : ConvergenceError(what), best(std::move(best)) {}
    InversionSolution best;
};

InversionSolution solve_inversion(const IntervalSystem& sys, const FirstKindBasis& basis,
                                  const PeriodData& periods, const Eigen::VectorXd& v);

}  // namespace oz
