#include "orthozeros/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "orthozeros/errors.hpp"

namespace oz {

IntervalSystem::IntervalSystem(std::vector<double> endpoints) : a_(std::move(endpoints)) {
    if (a_.size() < 2 || a_.size() % 2 != 0)
        throw DomainError("endpoints: need an even number (>= 2) of values");
    for (std::size_t k = 0; k < a_.size(); ++k) {
        if (!std::isfinite(a_[k])) throw DomainError("endpoints: non-finite value");
        if (k > 0 && !(a_[k] > a_[k - 1]))
            throw DomainError("endpoints: values must be strictly increasing");
    }
}

double IntervalSystem::H(double x) const {
    double p = 1.0;
    for (double ak : a_) p *= (x - ak);
    return p;
}

cplx IntervalSystem::H(cplx z) const {
    cplx p = 1.0;
    for (double ak : a_) p *= (z - ak);
    return p;
}

double IntervalSystem::rest(double x, int i, int j) const {
    double p = 1.0;
    for (int k = 1; k <= static_cast<int>(a_.size()); ++k)
        if (k != i && k != j) p *= (x - a_[k - 1]);
    return p;
}

Region IntervalSystem::locate(double x, double tol) const {
    if (x < a_.front() - tol) return {RegionKind::Left, 0};
    if (x > a_.back() + tol) return {RegionKind::Right, 0};
    for (int k = 1; k <= l(); ++k) {
        auto [lo, hi] = band(k);
        if (x >= lo - tol && x <= hi + tol) return {RegionKind::Band, k};
    }
    for (int j = 1; j < l(); ++j) {
        auto [lo, hi] = gap(j);
        if (x > lo && x < hi) return {RegionKind::Gap, j};
    }
    return {RegionKind::Right, 0};
}

bool IntervalSystem::in_band_interior(double x) const {
    for (int k = 1; k <= l(); ++k) {
        auto [lo, hi] = band(k);
        if (x > lo && x < hi) return true;
    }
    return false;
}

cplx IntervalSystem::sqrt_H(cplx z) const {
    if (z.imag() == 0.0) {
        if (in_E(z.real())) throw DomainError("sqrt_H: point lies on E; use boundary_sqrt_H");
        z = cplx(z.real(), 0.0);
    }
    cplx p = 1.0;
    for (double ak : a_) p *= std::sqrt(z - ak);
    return p;
}

cplx IntervalSystem::boundary_sqrt_H(double x) const {
    Region r = locate(x);
    if (r.kind != RegionKind::Band || !in_band_interior(x))
        throw DomainError("boundary_sqrt_H: point is not interior to a band");
    return cplx(0.0, band_sign(r.index) * std::sqrt(-H(x)));
}

double IntervalSystem::sqrt_H_real(double x) const {
    Region r = locate(x);
    switch (r.kind) {
        case RegionKind::Right: return std::sqrt(H(x));
        case RegionKind::Left: return ((l() % 2 == 0) ? 1.0 : -1.0) * std::sqrt(H(x));
        case RegionKind::Gap: return gap_sign(r.index) * std::sqrt(std::abs(H(x)));
        default: throw DomainError("sqrt_H_real: point lies on E");
    }
}

double IntervalSystem::h(double x) const {
    Region r = locate(x);
    if (r.kind != RegionKind::Band || !in_band_interior(x))
        throw DomainError("h: point is not interior to a band");
    return std::numbers::pi * band_sign(r.index) * std::sqrt(-H(x));
}

// ---------------------------------------------------------------------------

WeightSpec::WeightSpec(IntervalSystem sys, std::vector<double> R_roots, SmoothWeight w)
    : sys_(std::move(sys)), smooth_(std::move(w)) {
    if (!smooth_->W) throw DomainError("weight: smooth W needs an evaluator");
    init_roots(std::move(R_roots));
    band_signs_.assign(sys_.l(), 1);
    if (smooth_->sign_mode == SignMode::Auto) {
        for (int k = 1; k <= sys_.l(); ++k) {
            auto [lo, hi] = sys_.band(k);
            double mid = 0.5 * (lo + hi);
            double v = R(mid) / (smooth_->W(mid) * sys_.h(mid));
            band_signs_[k - 1] = (v < 0.0) ? -1 : 1;
        }
    }
}

WeightSpec::WeightSpec(IntervalSystem sys, std::vector<double> R_roots, BernsteinSzegoWeight w)
    : sys_(std::move(sys)), bs_(std::move(w)) {
    init_roots(std::move(R_roots));
    band_signs_.assign(sys_.l(), 1);
    init_rho();
}

void WeightSpec::init_roots(std::vector<double> R_roots) {
    const auto& a = sys_.endpoints();
    double tol = 1e-12 * sys_.span();
    std::vector<bool> used(a.size(), false);
    for (double r : R_roots) {
        bool found = false;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (std::abs(a[k] - r) <= tol) {
                if (used[k]) throw DomainError("R_roots: duplicate endpoint");
                used[k] = true;
                found = true;
            }
        }
        if (!found) throw DomainError("R_roots: value is not an endpoint of the system");
    }
    r_roots_.clear();
    s_roots_.clear();
    for (std::size_t k = 0; k < a.size(); ++k) (used[k] ? r_roots_ : s_roots_).push_back(a[k]);
    R_poly_ = poly::from_real_roots(r_roots_);
    S_poly_ = poly::from_real_roots(s_roots_);
}

void WeightSpec::init_rho() {
    poly::Poly p{1.0};
    for (auto& r : bs_->roots) {
        if (r.multiplicity < 1) throw DomainError("weight: root multiplicity must be >= 1");
        if (r.eps != 1 && r.eps != -1) throw DomainError("weight: eps must be +1 or -1");
        if (r.w.imag() == 0.0) {
            if (sys_.in_E(r.w.real())) throw DomainError("weight: rho has a root on E");
            for (int m = 0; m < r.multiplicity; ++m) p = poly::multiply(p, {-r.w.real(), 1.0});
        } else {
            if (r.w.imag() < 0.0) r.w = std::conj(r.w);
            if (r.eps == -1) throw DomainError("weight: eps = -1 requires a simple real root");
            for (int m = 0; m < r.multiplicity; ++m) p = poly::multiply(p, poly::conjugate_pair(r.w));
        }
        if (r.eps == -1 && r.multiplicity != 1)
            throw DomainError("weight: eps = -1 requires a simple real root");
    }
    if (bs_->c) {
        if (*bs_->c == 0.0 || !std::isfinite(*bs_->c)) throw DomainError("weight: c must be nonzero");
        rho_c_ = *bs_->c;
    } else {
        auto [lo, hi] = sys_.band(1);
        double mid = 0.5 * (lo + hi);
        double v = R(mid) / (poly::eval(p, mid) * sys_.h(mid));
        rho_c_ = (v < 0.0) ? -1.0 : 1.0;
    }
    rho_ = poly::scale(p, rho_c_);
}

bool WeightSpec::R_has(double endpoint) const {
    return std::find(r_roots_.begin(), r_roots_.end(), endpoint) != r_roots_.end();
}

int WeightSpec::R_roots_in_band(int k) const {
    auto [lo, hi] = sys_.band(k);
    return static_cast<int>(R_has(lo)) + static_cast<int>(R_has(hi));
}

const BernsteinSzegoWeight& WeightSpec::bs() const {
    if (!bs_) throw DomainError("weight is not of Bernstein-Szego type");
    return *bs_;
}

const SmoothWeight& WeightSpec::smooth() const {
    if (!smooth_) throw DomainError("weight is not smooth");
    return *smooth_;
}

int WeightSpec::nu() const {
    if (!bs_) return 0;
    int n = 0;
    for (const auto& r : bs_->roots) n += (r.w.imag() == 0.0 ? 1 : 2) * r.multiplicity;
    return n;
}

double WeightSpec::W_unsigned(double x) const {
    return bs_ ? poly::eval(rho_, x) : smooth_->W(x);
}

double WeightSpec::W(double x) const {
    double w = W_unsigned(x);
    if (smooth_) {
        Region r = sys_.locate(x);
        if (r.kind == RegionKind::Band) w *= band_signs_[r.index - 1];
    }
    return w;
}

double WeightSpec::log_abs_W(double x) const {
    double w = W_unsigned(x);
    if (w == 0.0 || !std::isfinite(w)) throw WeightError("weight: W vanishes or is not finite on E");
    return std::log(std::abs(w));
}

double WeightSpec::density_raw(double x) const {
    return R(x) / (W(x) * sys_.h(x));
}

double WeightSpec::density_S(double x) const {
    return std::abs(S(x) / (W(x) * sys_.h(x)));
}

double weight_density(const WeightSpec& spec, double x) {
    if (!spec.system().in_band_interior(x))
        throw DomainError("weight_density: point is not interior to a band");
    double v = spec.density_raw(x);
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "weight_density: nonpositive density " << v << " at x = " << x;
        throw WeightError(os.str());
    }
    return v;
}

ValidationReport validate(const WeightSpec& spec, int grid_size) {
    if (grid_size < 8) throw DomainError("validate: grid_size must be >= 8");
    ValidationReport rep;
    const auto& sys = spec.system();
    for (int k = 1; k <= sys.l(); ++k) {
        auto [lo, hi] = sys.band(k);
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int i = 1; i <= grid_size; ++i) {
            double x = mid + half * std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * grid_size));
            double v = spec.density_raw(x);
            ++rep.checked;
            if (!(v > 0.0) || !std::isfinite(v)) {
                rep.ok = false;
                rep.band = k;
                rep.x = x;
                rep.value = v;
                std::ostringstream os;
                os << "density " << v << " at x = " << x << " on band " << k;
                rep.message = os.str();
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace oz
