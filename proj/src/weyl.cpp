#include "ccf/weyl.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "ccf/errors.hpp"
#include "ccf/gridfn.hpp"

namespace ccf {

namespace {

bool integer_order(double alpha) { return std::abs(alpha - std::round(alpha)) < 1e-12; }

int ceil_order(double alpha) { return integer_order(alpha) ? static_cast<int>(std::round(alpha)) : static_cast<int>(std::ceil(alpha)); }

GridFunction repeated_derivative(GridFunction f, int m) {
  while (m >= 2) {
    f = derivative(f, 2);
    m -= 2;
  }
  if (m == 1) f = derivative(f, 1);
  return f;
}

}  // namespace

TestFunction::TestFunction(double a, double b, int p, double mass) : a_(a), b_(b), p_(p) {
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) throw DomainError("bump needs a < b");
  if (p < 4) throw DomainError("bump degree must be >= 4");
  // u^p (1 - u)^p = sum_k C(p, k) (-1)^k u^(p + k)
  poly_.assign(static_cast<std::size_t>(2 * p + 1), 0.0);
  double binom = 1.0;
  for (int k = 0; k <= p; ++k) {
    poly_[static_cast<std::size_t>(p + k)] = (k % 2 ? -binom : binom);
    binom = binom * (p - k) / (k + 1);
  }
  // int_a^b (t-a)^p (b-t)^p dt = L^(2p+1) B(p+1, p+1)
  const double L = b - a;
  const double beta = std::exp(2.0 * std::lgamma(p + 1.0) - std::lgamma(2.0 * p + 2.0));
  scale_ = mass / (L * beta);  // value of c * L^(2p)
}

double TestFunction::derivative(int n, double t) const {
  if (n < 0) throw UsageError("derivative order must be >= 0");
  if (t <= a_ || t >= b_) return 0.0;
  const double L = b_ - a_;
  const double u = (t - a_) / L;
  // Horner on the n-th derivative of the polynomial in u.
  double s = 0.0;
  for (int k = static_cast<int>(poly_.size()) - 1; k >= n; --k) {
    double c = poly_[static_cast<std::size_t>(k)];
    for (int j = 0; j < n; ++j) c *= (k - j);
    s = s * u + c;
  }
  return scale_ * s / std::pow(L, n);
}

GridFunction TestFunction::sample(const Grid& grid, int order) const {
  auto f = GridFunction::sample(grid, [&](double t) { return derivative(order, t); });
  if (auto s = f.detect_support()) return f.with_support(*s);
  return f;
}

TestFunction TestFunction::parse(std::string_view spec) {
  std::string s(spec);
  if (s.rfind("bump:", 0) == 0) s = s.substr(5);
  std::istringstream is(s);
  double a = 0, b = 0;
  int p = 0;
  char c1 = 0, c2 = 0;
  is >> a >> c1 >> b >> c2 >> p;
  if (!is || c1 != ',' || c2 != ',' || !is.eof()) throw UsageError("bump spec must be a,b,p: " + std::string(spec));
  try {
    return TestFunction(a, b, p);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

WeylOperator::WeylOperator(Kernel k) : k_(std::move(k)) {
  if (std::holds_alternative<Jalpha>(k_.variant())) return;
  if (const auto* c = std::get_if<CharInterval>(&k_.variant()); c && c->power == 1) return;
  throw UnsupportedKernel("no closed-form W_k for kernel " + k_.spec());
}

GridFunction t_prime(const Kernel& k, const GridFunction& f) { return dual_convolve(k, f); }

GridFunction weyl_apply(const WeylOperator& w, const TestFunction& f, const Grid& grid) {
  if (const auto* j = std::get_if<Jalpha>(&w.kernel().variant())) {
    const int m = ceil_order(j->alpha);
    const double sign = m % 2 ? -1.0 : 1.0;
    auto dm = f.sample(grid, m);
    if (integer_order(j->alpha)) return dm * cplx(sign);
    return dual_convolve(Kernel::jalpha(m - j->alpha), dm) * cplx(sign);
  }
  // chi01: -sum_n f'(t + n); terms with t + n >= b vanish.
  auto r = GridFunction::sample(grid, [&](double t) {
    double s = 0.0;
    for (double x = t; x < f.b(); x += 1.0) s += f.derivative(1, x);
    return -s;
  });
  if (auto s = r.detect_support()) return r.with_support(*s);
  return r;
}

GridFunction weyl_apply(const WeylOperator& w, const GridFunction& f) {
  if (const auto* j = std::get_if<Jalpha>(&w.kernel().variant())) {
    const int m = ceil_order(j->alpha);
    const double sign = m % 2 ? -1.0 : 1.0;
    if (integer_order(j->alpha)) return repeated_derivative(f, m) * cplx(sign);
    return repeated_derivative(dual_convolve(Kernel::jalpha(m - j->alpha), f), m) * cplx(sign);
  }
  const auto shift = f.grid().index_of(1.0);
  if (!shift) throw UsageError("W_chi01 on samples needs t = 1 on the grid");
  const auto d = derivative(f, 1);
  std::vector<cplx> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t k = i; k < v.size(); k += *shift) v[i] -= d[k];
  }
  return GridFunction(f.grid(), std::move(v));
}

double roundtrip_check(const Kernel& k, const TestFunction& f, const Grid& grid) {
  const WeylOperator w(k);
  return max_abs_diff(t_prime(k, weyl_apply(w, f, grid)), f.sample(grid));
}

double roundtrip_check(const Kernel& k, const GridFunction& f) {
  const WeylOperator w(k);
  return max_abs_diff(t_prime(k, weyl_apply(w, f)), f);
}

}  // namespace ccf
