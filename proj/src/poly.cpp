#include "orthozeros/poly.hpp"

#include <algorithm>
#include <cmath>

namespace oz::poly {

double eval(const Poly& p, double x) {
    double s = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * x + *it;
    return s;
}

std::complex<double> eval(const Poly& p, std::complex<double> z) {
    std::complex<double> s = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * z + *it;
    return s;
}

Poly derivative(const Poly& p) {
    if (p.size() <= 1) return {0.0};
    Poly d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
    return d;
}

Poly multiply(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Poly add(const Poly& a, const Poly& b) {
    Poly c(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    return c;
}

Poly scale(const Poly& p, double s) {
    Poly q(p);
    for (auto& c : q) c *= s;
    return q;
}

Poly from_real_roots(const std::vector<double>& roots) {
    Poly p{1.0};
    for (double r : roots) p = multiply(p, {-r, 1.0});
    return p;
}

Poly conjugate_pair(std::complex<double> w) {
    return {std::norm(w), -2.0 * w.real(), 1.0};
}

Poly divide_linear(const Poly& p, double r) {
    if (p.size() <= 1) return {0.0};
    Poly q(p.size() - 1);
    double carry = 0.0;
    for (std::size_t k = p.size() - 1; k >= 1; --k) {
        carry = p[k] + carry * r;
        q[k - 1] = carry;
    }
    return q;
}

int degree(const Poly& p) {
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k)
        if (p[k] != 0.0) return k;
    return 0;
}

void trim(Poly& p, double tol) {
    while (p.size() > 1 && std::abs(p.back()) <= tol) p.pop_back();
}

}  // namespace oz::poly
