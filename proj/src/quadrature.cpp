#include "ccf/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "ccf/errors.hpp"

namespace ccf::quad {

namespace {

CellRule make_rule(double left, double right, int points) {
  gsl_set_error_handler_off();
  const bool plain = left == 0.0 && right == 0.0;
  // GSL weight on [a, b] is (b - x)^alpha (x - a)^beta.
  gsl_integration_fixed_workspace* ws =
      plain ? gsl_integration_fixed_alloc(gsl_integration_fixed_legendre, points, 0.0, 1.0, 0.0, 0.0)
            : gsl_integration_fixed_alloc(gsl_integration_fixed_jacobi, points, 0.0, 1.0, right, left);
  if (!ws) throw std::runtime_error("cannot build Gauss rule");
  CellRule r;
  const double* x = gsl_integration_fixed_nodes(ws);
  const double* w = gsl_integration_fixed_weights(ws);
  for (int i = 0; i < points; ++i) {
    r.x.push_back(x[i]);
    r.w.push_back(plain ? w[i] : w[i] / (std::pow(x[i], left) * std::pow(1.0 - x[i], right)));
  }
  gsl_integration_fixed_free(ws);
  return r;
}

}  // namespace

const CellRule& cell_rule(double left, double right, int points) {
  if (left <= -1.0 || right <= -1.0) throw DomainError("non-integrable endpoint singularity");
  using Key = std::tuple<long long, long long, int>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<CellRule>> cache;
  const Key key{std::llround(left * 1e9), std::llround(right * 1e9), points};
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<CellRule>(make_rule(left, right, points))).first;
  return *it->second;
}

bool needs_factorization(double gamma) noexcept {
  return gamma > -1.0 && gamma < 1.0 && std::abs(gamma - std::round(gamma)) > 1e-12;
}

Factor::Factor(const GridFunction& u) : gamma_(u.origin_exponent()), v_(u.values().begin(), u.values().end()) {
  factorized_ = needs_factorization(gamma_);
  if (!factorized_) return;
  const double h = u.grid().step();
  for (std::size_t j = 1; j < v_.size(); ++j) v_[j] /= std::pow(static_cast<double>(j) * h, gamma_);
  if (v_.size() >= 4) {
    v_[0] = 3.0 * v_[1] - 3.0 * v_[2] + v_[3];
  } else {
    v_[0] = 2.0 * v_[1] - v_[2];
  }
}

KernelQuadrature::KernelQuadrature(Kernel w, double h, std::size_t cells)
    : w_(std::move(w)), h_(h), left_(cells), right_(cells) {
  const double xmax = h * static_cast<double>(cells);
  if (const auto* sm = std::get_if<Sampled>(&w_.variant()); sm && sm->samples->grid().length() < xmax * (1.0 - 1e-12)) {
    throw ShapeError("sampled kernel does not cover the quadrature range");
  }
  breaks_ = w_.breakpoints(0.0, xmax);
  std::vector<Singularity> sing;
  if (auto e = w_.origin_exponent()) sing.push_back({0.0, *e});
  // Kernels that are smooth but not of power type can still rise steeply.
  const bool steep = std::holds_alternative<Kdelta>(w_.variant()) || std::holds_alternative<Subordinated>(w_.variant());
  const auto n = static_cast<std::ptrdiff_t>(cells);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t qq = 0; qq < n; ++qq) {
    const double a = static_cast<double>(qq) * h;
    auto lo = std::upper_bound(breaks_.begin(), breaks_.end(), a);
    auto hi = std::lower_bound(lo, breaks_.end(), a + h);
    const std::span<const double> cell_breaks(breaks_.data() + (lo - breaks_.begin()), static_cast<std::size_t>(hi - lo));
    auto f = [this](double x) { return w_(x); };
    const auto hm = steep ? hat_moments_adaptive(f, a, h, sing, cell_breaks, 1e-17 * h)
                          : hat_moments(f, a, h, sing, cell_breaks);
    left_[static_cast<std::size_t>(qq)] = hm.left;
    right_[static_cast<std::size_t>(qq)] = hm.right;
  }
}

template <class F>
HatMoments KernelQuadrature::mapped_cell(F&& f, Orientation o, long c, std::size_t j,
                                         std::span<const Singularity> extra_sing,
                                         std::span<const double> extra_breaks) const {
  const double a = static_cast<double>(j) * h_;
  const double ch = static_cast<double>(c) * h_;
  Singularity sing[4];
  std::size_t ns = 0;
  for (const auto& e : extra_sing) sing[ns++] = e;
  if (auto e = w_.origin_exponent()) sing[ns++] = {o == Orientation::forward ? -ch : ch, *e};
  // Kernel breakpoints inside the x-range of this cell, mapped to r.
  const double x0 = o == Orientation::forward ? a + ch : ch - a - h_;
  auto lo = std::upper_bound(breaks_.begin(), breaks_.end(), x0);
  auto hi = std::lower_bound(lo, breaks_.end(), x0 + h_);
  double rb[12];
  std::size_t nb = 0;
  for (auto it = lo; it != hi && nb < 8; ++it) rb[nb++] = o == Orientation::forward ? *it - ch : ch - *it;
  for (double b : extra_breaks) {
    if (nb < 12) rb[nb++] = b;
  }
  auto g = [&](double r) { return w_(o == Orientation::forward ? r + ch : ch - r) * f(r); };
  return hat_moments(g, a, h_, std::span<const Singularity>(sing, ns), std::span<const double>(rb, nb));
}

HatMoments KernelQuadrature::factorized_cell(double gamma, Orientation o, long c, std::size_t j) const {
  const Singularity s{0.0, gamma};
  return mapped_cell([gamma](double r) { return std::pow(r, gamma); }, o, c, j, std::span<const Singularity>(&s, 1),
                     {});
}

double KernelQuadrature::integrate_pair(const Kernel& k, Orientation o, long c, std::size_t j_lo,
                                        std::size_t j_hi) const {
  double s = 0.0;
  std::vector<Singularity> sing;
  if (auto e = k.origin_exponent()) sing.push_back({0.0, *e});
  for (std::size_t j = j_lo; j < j_hi; ++j) {
    const long q = o == Orientation::forward ? static_cast<long>(j) + c : c - static_cast<long>(j) - 1;
    if (q < 0) continue;
    const double a = static_cast<double>(j) * h_;
    const auto kb = k.breakpoints(a, a + h_);
    const auto hm = mapped_cell(k, o, c, j, sing, kb);
    s += hm.left + hm.right;
  }
  return s;
}

cplx KernelQuadrature::integrate(const Factor& u, Orientation o, long c, std::size_t j_lo, std::size_t j_hi) const {
  cplx s{};
  for (std::size_t j = j_lo; j < j_hi; ++j) {
    const long q = o == Orientation::forward ? static_cast<long>(j) + c : c - static_cast<long>(j) - 1;
    if (q < 0) continue;  // kernel vanishes for negative arguments
    if (static_cast<std::size_t>(q) >= left_.size()) throw ShapeError("kernel moment table too short");
    if (u.factorized()) {
      const auto hm = factorized_cell(u.gamma(), o, c, j);
      s += u[j] * hm.left + u[j + 1] * hm.right;
    } else if (o == Orientation::forward) {
      s += u[j] * left_[q] + u[j + 1] * right_[q];
    } else {
      s += u[j] * right_[q] + u[j + 1] * left_[q];
    }
  }
  return s;
}

namespace {

// Factors sampled from a kernel with jumps are integrated from the kernel
// itself; a linear interpolant cannot represent a jump at an integration end.
bool exact_factor(const GridFunction& u) {
  if (!u.source() || !std::holds_alternative<CharInterval>(u.source()->variant())) return false;
  return !u.source()->breakpoints(0.0, u.grid().length()).empty();
}

double result_exponent(const Kernel& w, double gamma_u) {
  const auto e = w.origin_order();
  if (!e) return 0.0;
  const double g = *e + gamma_u + 1.0;
  return needs_factorization(g) ? g : 0.0;
}

}  // namespace

GridFunction KernelQuadrature::convolve(const GridFunction& u, Backend backend) const {
  const std::size_t n = u.size();
  if (n - 1 > left_.size()) throw ShapeError("kernel moment table too short for convolution");
  const double h = u.grid().step();
  if (std::abs(h - h_) > 1e-12 * h) throw ShapeError("kernel quadrature step differs from grid step");
  const Factor f(u);
  std::vector<cplx> out(n);
  const std::size_t lo = u.support() ? u.support()->lo : 0;
  if (exact_factor(u)) {
    const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t ii = 1; ii < nn; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      out[i] = integrate_pair(*u.source(), Orientation::reversed, static_cast<long>(i), 0, i);
    }
  } else if (!f.factorized()) {
    auto lx = [&](std::size_t m) { return m < left_.size() ? left_[m] : 0.0; };
    std::vector<cplx> kc(n);
    for (std::size_t m = 0; m < n; ++m) kc[m] = lx(m) + (m >= 1 ? right_[m - 1] : 0.0);
    out = discrete_convolution(kc, f.values(), n, backend);
    for (std::size_t i = 0; i < n; ++i) out[i] -= f[0] * lx(i);
  } else {
    const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t ii = 1; ii < nn; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      out[i] = integrate(f, Orientation::reversed, static_cast<long>(i), 0, i);
    }
  }
  // The origin value is the t -> 0 limit: zero unless w * u ~ t^0 there.
  const auto order = w_.origin_order();
  if (order && std::abs(*order + u.origin_exponent() + 1.0) < 1e-12 && n >= 4) {
    out[0] = 3.0 * out[1] - 3.0 * out[2] + out[3];
  } else {
    out[0] = 0.0;
  }
  for (std::size_t i = 0; i < lo && i < n; ++i) out[i] = 0.0;
  GridFunction r(u.grid(), std::move(out));
  if (u.support()) r = r.with_support(Support{u.support()->lo, n - 1});
  return r.with_origin_exponent(result_exponent(w_, f.factorized() ? f.gamma() : u.origin_exponent()));
}

GridFunction KernelQuadrature::dual(const GridFunction& u, Backend backend) const {
  const std::size_t n = u.size();
  if (n - 1 > left_.size()) throw ShapeError("kernel moment table too short for dual convolution");
  const double h = u.grid().step();
  if (std::abs(h - h_) > 1e-12 * h) throw ShapeError("kernel quadrature step differs from grid step");
  const Factor f(u);
  const std::size_t last = n - 1;
  const std::size_t hi = u.support() ? u.support()->hi : last;
  std::vector<cplx> out(n);
  if (exact_factor(u)) {
    const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t ii = 0; ii < nn; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      out[i] = integrate_pair(*u.source(), Orientation::forward, -static_cast<long>(i), i, last);
    }
  } else if (!f.factorized()) {
    auto lx = [&](std::size_t m) { return m < left_.size() ? left_[m] : 0.0; };
    std::vector<cplx> kd(n), rev(n);
    for (std::size_t m = 0; m < n; ++m) kd[m] = lx(m) + (m >= 1 ? right_[m - 1] : 0.0);
    for (std::size_t k = 0; k < n; ++k) rev[k] = f[last - k];
    const auto conv = discrete_convolution(rev, kd, n, backend);
    for (std::size_t i = 0; i < n; ++i) out[i] = conv[last - i] - f[last] * lx(last - i);
  } else {
    const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t ii = 0; ii < nn; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      out[i] = integrate(f, Orientation::forward, -static_cast<long>(i), i, last);
    }
  }
  for (std::size_t i = hi + 1; i < n; ++i) out[i] = 0.0;
  out[last] = 0.0;
  GridFunction r(u.grid(), std::move(out));
  if (u.support()) r = r.with_support(Support{0, hi});
  return r;
}

cplx integrate(const Factor& u, double h, std::size_t j_lo, std::size_t j_hi) {
  cplx s{};
  if (!u.factorized()) {
    for (std::size_t j = j_lo; j < j_hi; ++j) s += 0.5 * h * (u[j] + u[j + 1]);
    return s;
  }
  const double g = u.gamma();
  const Singularity sing[1] = {{0.0, g}};
  for (std::size_t j = j_lo; j < j_hi; ++j) {
    const auto hm = hat_moments([g](double r) { return std::pow(r, g); }, static_cast<double>(j) * h, h, sing, {});
    s += u[j] * hm.left + u[j + 1] * hm.right;
  }
  return s;
}

}  // namespace ccf::quad
