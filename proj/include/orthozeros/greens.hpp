#pragma once

#include <optional>
#include <vector>

#include "orthozeros/geometry.hpp"
#include "orthozeros/poly.hpp"
#include "orthozeros/quadrature.hpp"

namespace oz {

struct PellData;

struct RInfinity {
    poly::Poly coeffs;                  // monic, degree l-1
    std::vector<double> gap_residuals;  // int_gap r/sqrt(H)
    std::vector<double> gap_zeros;      // one per gap
    double condition = 1.0;
};

RInfinity compute_r_inf(const IntervalSystem& sys);

std::vector<double> harmonic_measures(const IntervalSystem& sys);
std::vector<double> harmonic_measures(const IntervalSystem& sys, const RInfinity& r);

struct RX0 {
    double x0 = 0.0;
    poly::Poly r;         // degree <= l-1
    poly::Poly M;         // monic, from the linear conditions of M directly
    double w1_residual = 0.0;
    std::vector<double> pv_residuals;
    double identity_residual = 0.0;
    double condition = 1.0;
    bool near_degenerate = false;
};

RX0 compute_r_x0(const IntervalSystem& sys, double x0);
RX0 compute_r_x0(const IntervalSystem& sys, const RInfinity& rinf, double x0);

// coef * p(xi) / ((xi - pole) sqrt(H(xi))) dxi
struct Differential {
    poly::Poly p;
    std::optional<double> pole;
    double coef = 1.0;
};

// Integral of a sum of differentials from the real point `base` to z.
// Real parts of the path run along the upper rim of the real axis; a pole on the
// path is passed above it. Lower half-plane values are obtained by conjugation.
cplx path_integral(const IntervalSystem& sys, const std::vector<Differential>& terms, double base,
                   cplx z);

// phi(z, inf) = exp(int r_inf / sqrt(H)). The argument is taken along the path that
// starts at the branch point closest to z on its right (see README).
cplx green_phi_inf(const IntervalSystem& sys, cplx z);
cplx green_phi_inf(const IntervalSystem& sys, const RInfinity& r, cplx z);

cplx green_phi_x0(const IntervalSystem& sys, cplx z, double x0);
cplx green_phi_x0(const IntervalSystem& sys, const RX0& r, cplx z);

class PsiFunction {
public:
    PsiFunction(IntervalSystem sys, std::vector<Differential> terms, double sign, int inf_exponent);

    cplx operator()(cplx z) const;
    // Boundary value from the upper half plane on int(E); unimodular.
    cplx boundary(double x) const;
    double chi(double x) const { return std::arg(boundary(x)); }
    int infinity_exponent() const { return inf_exp_; }

private:
    IntervalSystem sys_;
    std::vector<Differential> terms_;
    double sign_;
    int inf_exp_;
};

// psi_n for a Bernstein-Szego weight with real rho roots, built from the Pell data.
PsiFunction build_psi(const WeightSpec& spec, int n, const PellData& pell);

}  // namespace oz
