#include "ccf/closed_forms.hpp"

#include <cmath>

namespace ccf::closed {

cplx jbeta_cosh(double beta, cplx a, double t) {
  if (t <= 0.0) return 0.0;
  const cplx a2 = a * a;
  cplx s = 0.0, a2j = 1.0;
  for (int j = 0; j < 400; ++j) {
    const double e = beta + 2.0 * j;
    const cplx term = a2j * std::exp(e * std::log(t) - std::lgamma(e + 1.0));
    s += term;
    if (j > 4 && std::abs(term) < 1e-18 * std::abs(s)) break;
    a2j *= a2;
  }
  return s;
}

cplx bspline_cosh(int n, cplx a, double t) {
  cplx s = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n && t > k; ++k) {
    s += ((k % 2) ? -binom : binom) * jbeta_cosh(n, a, t - k);
    binom = binom * (n - k) / (k + 1);
  }
  return s;
}

cplx log_sinh(cplx z) {
  // sinh(-z) = -sinh(z); keep Re z >= 0 so exp(-2z) stays bounded.
  cplx shift = 0.0;
  if (z.real() < 0.0) {
    z = -z;
    shift = cplx(0.0, M_PI);
  }
  return z - std::log(2.0) + std::log(1.0 - std::exp(-2.0 * z)) + shift;
}

}  // namespace ccf::closed
