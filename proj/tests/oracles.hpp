#pragma once

// Closed forms used as ground truth by the tests.

#include <cmath>
#include <complex>

namespace oracle {

using cplx = std::complex<double>;

inline double jalpha(double a, double t) { return t <= 0.0 ? 0.0 : std::pow(t, a - 1.0) / std::tgamma(a); }

// (j_beta * cosh(a .))(t) = sum_j a^(2j) t^(beta+2j) / Gamma(beta+2j+1).
inline cplx jbeta_cosh(double beta, cplx a, double t) {
  if (t <= 0.0) return 0.0;
  cplx s = 0.0, a2j = 1.0;
  const cplx a2 = a * a;
  for (int j = 0; j < 400; ++j) {
    const double e = beta + 2.0 * j;
    const cplx term = a2j * std::exp(e * std::log(t) - std::lgamma(e + 1.0));
    s += term;
    if (j > 4 && std::abs(term) < 1e-18 * std::abs(s)) break;
    a2j *= a2;
  }
  return s;
}

// (chi01^{*n} * cosh(a .))(t) from the B-spline difference formula.
inline cplx chi_power_cosh(int n, cplx a, double t) {
  cplx s = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (t > k) s += ((k % 2) ? -binom : binom) * jbeta_cosh(n, a, t - k);
    binom = binom * (n - k) / (k + 1);
  }
  return s;
}

inline double kdelta_half(double t) {
  return std::pow(t, -1.5) * std::exp(-1.0 / (4.0 * t)) / (2.0 * std::sqrt(M_PI));
}

}  // namespace oracle
