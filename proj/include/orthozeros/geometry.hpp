#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthozeros/poly.hpp"

namespace oz {

using cplx = std::complex<double>;

enum class RegionKind { Band, Gap, Left, Right };

struct Region {
    RegionKind kind;
    int index;  // band k or gap j (1-based); 0 for Left/Right
};

// Endpoints a_1 < ... < a_{2l}; bands E_k = [a_{2k-1}, a_{2k}], gaps (a_{2k}, a_{2k+1}).
class IntervalSystem {
public:
    explicit IntervalSystem(std::vector<double> endpoints);

    int l() const { return static_cast<int>(a_.size() / 2); }
    const std::vector<double>& endpoints() const { return a_; }
    double a(int k) const { return a_[k - 1]; }
    std::pair<double, double> band(int k) const { return {a_[2 * k - 2], a_[2 * k - 1]}; }
    std::pair<double, double> gap(int j) const { return {a_[2 * j - 1], a_[2 * j]}; }
    double span() const { return a_.back() - a_.front(); }

    double H(double x) const;
    cplx H(cplx z) const;
    // H with the factors (x - a_i), (x - a_j) left out (1-based indices).
    double rest(double x, int i, int j) const;

    // (-1)^{l-k}
    int band_sign(int k) const { return ((l() - k) % 2 == 0) ? 1 : -1; }
    // (-1)^{l-j}: sign of the real branch of sqrt(H) on gap j.
    int gap_sign(int j) const { return ((l() - j) % 2 == 0) ? 1 : -1; }

    // Closed bands win over gaps when x sits on an endpoint (within tol).
    Region locate(double x, double tol = 0.0) const;
    bool in_E(double x, double tol = 0.0) const { return locate(x, tol).kind == RegionKind::Band; }
    bool in_band_interior(double x) const;

    // Branch analytic on C \ E, positive on (a_{2l}, inf).
    cplx sqrt_H(cplx z) const;
    // Limit from the upper half plane at x in int(E_k): i (-1)^{l-k} sqrt(-H).
    cplx boundary_sqrt_H(double x) const;
    // Real value of sqrt(H) at real x off E.
    double sqrt_H_real(double x) const;
    // h(x) = pi (-1)^{l-k} sqrt(-H(x)) on int(E_k).
    double h(double x) const;

private:
    std::vector<double> a_;
};

enum class SignMode { Auto, Literal };

struct SmoothWeight {
    std::function<double(double)> W;
    SignMode sign_mode = SignMode::Auto;
    std::string smoothness = "C2";
    std::string label;
};

struct BSRoot {
    cplx w;
    int multiplicity = 1;
    int eps = 1;
};

struct BernsteinSzegoWeight {
    std::vector<BSRoot> roots;  // one entry per conjugate pair for complex roots
    std::optional<double> c;    // unset: sign chosen so that R/(rho h) > 0 on E_1, magnitude 1
};

enum class MeasureSide { R, S };

// R/(W h) on E with R S = H.
class WeightSpec {
public:
    WeightSpec(IntervalSystem sys, std::vector<double> R_roots, SmoothWeight w);
    WeightSpec(IntervalSystem sys, std::vector<double> R_roots, BernsteinSzegoWeight w);

    const IntervalSystem& system() const { return sys_; }
    const std::vector<double>& R_roots() const { return r_roots_; }
    const std::vector<double>& S_roots() const { return s_roots_; }
    int deg_R() const { return static_cast<int>(r_roots_.size()); }
    int deg_S() const { return static_cast<int>(s_roots_.size()); }
    bool R_has(double endpoint) const;
    // #Z(R, E_k): endpoints of E_k that are roots of R.
    int R_roots_in_band(int k) const;

    double R(double x) const { return poly::eval(R_poly_, x); }
    double S(double x) const { return poly::eval(S_poly_, x); }
    const poly::Poly& R_poly() const { return R_poly_; }
    const poly::Poly& S_poly() const { return S_poly_; }

    bool is_bernstein_szego() const { return bs_.has_value(); }
    const BernsteinSzegoWeight& bs() const;
    const SmoothWeight& smooth() const;

    // rho_nu = c prod (x - w_j)^{nu_j}; only for Bernstein-Szego weights.
    const poly::Poly& rho() const { return rho_; }
    double rho_c() const { return rho_c_; }
    int nu() const;

    // Weight as it enters the density: sign-adjusted W for Smooth, rho for Bernstein-Szego.
    double W(double x) const;
    double log_abs_W(double x) const;
    // R(x)/(W(x) h(x)) at an interior band point (sign not checked).
    double density_raw(double x) const;
    // Absolute density used for the S-measure: |S/(W h)|.
    double density_S(double x) const;

    int band_sign_factor(int k) const { return band_signs_[k - 1]; }

private:
    void init_roots(std::vector<double> R_roots);
    void init_rho();
    double W_unsigned(double x) const;

    IntervalSystem sys_;
    std::vector<double> r_roots_, s_roots_;
    poly::Poly R_poly_, S_poly_;
    std::optional<SmoothWeight> smooth_;
    std::optional<BernsteinSzegoWeight> bs_;
    poly::Poly rho_{1.0};
    double rho_c_ = 1.0;
    std::vector<int> band_signs_;
};

// R(x)/(W(x) h(x)), required positive.
double weight_density(const WeightSpec& spec, double x);

struct ValidationReport {
    bool ok = true;
    int checked = 0;
    int band = 0;           // first offending band
    double x = 0.0;         // first offending point
    double value = 0.0;     // density there
    std::string message;
};

ValidationReport validate(const WeightSpec& spec, int grid_size = 64);

}  // namespace oz
