#pragma once

#include <complex>
#include <vector>

// Dense real polynomials, coefficients in ascending order.
namespace oz::poly {

using Poly = std::vector<double>;

double eval(const Poly& p, double x);
std::complex<double> eval(const Poly& p, std::complex<double> z);
Poly derivative(const Poly& p);
Poly multiply(const Poly& a, const Poly& b);
Poly add(const Poly& a, const Poly& b);
Poly scale(const Poly& p, double s);
Poly from_real_roots(const std::vector<double>& roots);
// (x - w)(x - conj w)
Poly conjugate_pair(std::complex<double> w);
// Quotient of p by (x - r); the remainder p(r) is dropped.
Poly divide_linear(const Poly& p, double r);
int degree(const Poly& p);
void trim(Poly& p, double tol = 0.0);

}  // namespace oz::poly
