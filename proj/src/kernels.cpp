#include "ccf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "ccf/errors.hpp"
#include "ccf/gridfn.hpp"
#include "gsl_util.hpp"

namespace ccf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Gaussian tail cut: exp(-u^2) < 1e-16 beyond u_star.
const double kUStar = std::sqrt(16.0 * std::log(10.0));

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

namespace detail {

double bspline(int n, double t) {
  if (t < 0.0 || t >= static_cast<double>(n)) return 0.0;
  // Cox-de Boor recursion M_n(t) = (t M_{n-1}(t) + (n - t) M_{n-1}(t - 1)) / (n - 1).
  std::vector<double> m(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double x = t - j;
    m[static_cast<std::size_t>(j)] = (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
  }
  for (int order = 2; order <= n; ++order) {
    for (int j = 0; j + order <= n; ++j) {
      const double x = t - j;
      const auto u = static_cast<std::size_t>(j);
      m[u] = (x * m[u] + (order - x) * m[u + 1]) / (order - 1);
    }
  }
  return m[0];
}

double kdelta_series(double delta, double t, int terms) {
  const double lt = std::log(t);
  double s = 0.0;
  for (int k = 1; k <= terms; ++k) {
    const double mag = std::exp(std::lgamma(k * delta + 1.0) - std::lgamma(k + 1.0) - (k * delta + 1.0) * lt);
    const double term = mag * std::sin(k * kPi * delta);
    s += (k % 2 == 1) ? term : -term;
  }
  return s / kPi;
}

double kdelta_log_contour(double delta, double t) {
  const double q = 1.0 / (1.0 - delta);
  const double y = std::pow(t, -delta * q);
  auto log_a = [delta, q](double phi) {
    return q * (delta * std::log(std::sin(delta * phi)) + (1.0 - delta) * std::log(std::sin((1.0 - delta) * phi)) -
                std::log(std::sin(phi)));
  };
  const double log_a0 = q * (delta * std::log(delta) + (1.0 - delta) * std::log(1.0 - delta));
  const double a0 = std::exp(log_a0);
  // exp(-A0 y) is factored out; the remaining integrand is O(1) near phi = 0.
  auto g = [&](double phi) {
    if (phi <= 0.0) return a0;
    if (phi >= kPi) return 0.0;
    const double a = std::exp(log_a(phi));
    return a * std::exp(-(a - a0) * y);
  };
  const double width = std::min(kPi, 8.0 / std::sqrt(1.0 + a0 * y));
  double integral = detail::integrate_qag(g, 0.0, width, 1e-13);
  if (width < kPi) integral += detail::integrate_qag(g, width, kPi, 1e-13);
  if (integral <= 0.0) return -kInf;
  return std::log(delta * q) - q * std::log(t) - std::log(kPi) - a0 * y + std::log(integral);
}

double kdelta_contour(double delta, double t) { return std::exp(kdelta_log_contour(delta, t)); }

double kdelta_crossover(double delta) {
  constexpr int kNext = 41;
  const double need =
      (std::lgamma(kNext * delta + 1.0) - std::lgamma(kNext + 1.0) + 12.0 * std::log(10.0)) / (kNext * delta + 1.0);
  // Also keep t^-delta <= 1.5 so the alternating terms stay moderate.
  return std::max(std::exp(need), std::pow(1.5, -1.0 / delta));
}

}  // namespace detail

Kernel Kernel::jalpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("jalpha needs alpha > 0");
  return Kernel(Jalpha{alpha});
}

Kernel Kernel::chi01() { return Kernel(CharInterval{1}); }

Kernel Kernel::char_interval_power(int n) {
  if (n < 1) throw DomainError("chi01 power must be >= 1");
  return Kernel(CharInterval{n});
}

Kernel Kernel::kdelta(double delta, double scale) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("kdelta needs 0 < delta < 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("kdelta scale must be positive");
  return Kernel(Kdelta{delta, scale});
}

Kernel Kernel::subordinated(const Kernel& base) { return Kernel(Subordinated{std::make_shared<const Kernel>(base)}); }

Kernel Kernel::sampled(GridFunction samples) {
  return Kernel(Sampled{std::make_shared<const GridFunction>(std::move(samples))});
}

double Kernel::operator()(double t) const {
  if (t < 0.0) return 0.0;
  return std::visit(
      overloaded{
          [t](const Jalpha& k) -> double {
            if (t == 0.0) return k.alpha < 1.0 ? kInf : (k.alpha == 1.0 ? 1.0 : 0.0);
            return std::exp((k.alpha - 1.0) * std::log(t) - std::lgamma(k.alpha));
          },
          [t](const CharInterval& k) -> double {
            if (k.power == 1) return t < 1.0 ? 1.0 : (t == 1.0 ? 0.5 : 0.0);
            return detail::bspline(k.power, t);
          },
          [t](const Kdelta& k) -> double {
            if (t == 0.0) return 0.0;
            const double x = t / k.scale;
            const double v = x >= detail::kdelta_crossover(k.delta) ? detail::kdelta_series(k.delta, x, 40)
                                                                    : detail::kdelta_contour(k.delta, x);
            return v / k.scale;
          },
          [t, this](const Subordinated& k) -> double {
            double tt = t;
            if (t == 0.0) {
              const auto e = origin_order();
              if (e && *e < 0.0) return kInf;
              if (!e || *e > 0.0) return 0.0;
              tt = 1e-20;  // finite limit: evaluate just off the origin
            }
            const double st = 2.0 * std::sqrt(tt);
            auto f = [&](double u) { return u * std::exp(-u * u) * (*k.base)(st * u); };
            std::vector<double> cuts{0.0};
            for (double b : k.base->breakpoints(0.0, st * kUStar)) cuts.push_back(b / st);
            cuts.push_back(kUStar);
            double s = 0.0;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += detail::integrate_qags(f, cuts[i], cuts[i + 1], 1e-12);
            return 2.0 / std::sqrt(kPi * tt) * s;
          },
          [t](const Sampled& k) -> double {
            const auto& g = *k.samples;
            const double x = t / g.grid().step();
            const auto i = static_cast<std::size_t>(x);
            if (i >= g.size() - 1) return i == g.size() - 1 && x == static_cast<double>(i) ? g[i].real() : 0.0;
            const double xi = x - static_cast<double>(i);
            return (1.0 - xi) * g[i].real() + xi * g[i + 1].real();
          },
      },
      v_);
}

std::optional<double> Kernel::origin_order() const {
  return std::visit(overloaded{
                        [](const Jalpha& k) -> std::optional<double> { return k.alpha - 1.0; },
                        [](const CharInterval& k) -> std::optional<double> { return k.power - 1.0; },
                        [](const Kdelta&) -> std::optional<double> { return std::nullopt; },
                        [](const Subordinated& k) -> std::optional<double> {
                          const auto e = k.base->origin_order();
                          if (!e) return std::nullopt;
                          return (*e - 1.0) / 2.0;
                        },
                        [](const Sampled& k) -> std::optional<double> { return k.samples->origin_exponent(); },
                    },
                    v_);
}

std::optional<double> Kernel::origin_exponent() const {
  const auto e = origin_order();
  if (!e || (*e >= 0.0 && is_integer(*e))) return std::nullopt;
  return e;
}

std::vector<double> Kernel::breakpoints(double lo, double hi) const {
  std::vector<double> out;
  std::visit(overloaded{
                 [&](const CharInterval& k) {
                   for (int j = 1; j <= k.power; ++j) {
                     if (j > lo && j < hi) out.push_back(j);
                   }
                 },
                 [&](const Sampled& k) {
                   const double h = k.samples->grid().step();
                   for (std::size_t i = 1; i < k.samples->size(); ++i) {
                     const double x = static_cast<double>(i) * h;
                     if (x > lo && x < hi) out.push_back(x);
                   }
                 },
                 [](const auto&) {},
             },
             v_);
  return out;
}

std::optional<double> Kernel::support_end() const {
  if (const auto* c = std::get_if<CharInterval>(&v_)) return static_cast<double>(c->power);
  if (const auto* s = std::get_if<Sampled>(&v_)) {
    const auto sup = s->samples->detect_support();
    return sup ? s->samples->grid().node(std::min(sup->hi + 1, s->samples->size() - 1)) : 0.0;
  }
  return std::nullopt;
}

cplx Kernel::laplace(cplx lambda) const {
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) throw DomainError("non-finite lambda");
  return std::visit(
      overloaded{
          [lambda](const Jalpha& k) -> cplx {
            if (lambda == cplx{}) throw DomainError("j_alpha transform is singular at lambda = 0");
            if (lambda.real() <= 0.0 && !is_integer(k.alpha)) {
              throw DomainError("j_alpha transform needs Re(lambda) > 0 for non-integer alpha");
            }
            return std::exp(-k.alpha * std::log(lambda));
          },
          [lambda](const CharInterval& k) -> cplx {
            cplx one;
            if (std::abs(lambda) < 1e-4) {
              one = 1.0 - lambda / 2.0 + lambda * lambda / 6.0 - lambda * lambda * lambda / 24.0;
            } else {
              one = (1.0 - std::exp(-lambda)) / lambda;
            }
            return std::pow(one, k.power);
          },
          [lambda](const Kdelta& k) -> cplx {
            if (lambda.real() < 0.0) throw DomainError("K_delta transform needs Re(lambda) >= 0");
            if (lambda == cplx{}) return 1.0;
            return std::exp(-std::pow(k.scale * lambda, k.delta));
          },
          [lambda](const Subordinated& k) -> cplx {
            if (lambda.real() <= 0.0) throw DomainError("subordinated transform needs Re(lambda) > 0");
            return k.base->laplace(std::sqrt(lambda));
          },
          [lambda](const Sampled& k) -> cplx { return laplace_transform(*k.samples, lambda); },
      },
      v_);
}

std::optional<Kernel> Kernel::analytic_power(int n) const {
  if (n < 1) throw UsageError("convolution power needs n >= 1");
  return std::visit(overloaded{
                        [n](const Jalpha& k) -> std::optional<Kernel> { return jalpha(n * k.alpha); },
                        [n](const CharInterval& k) -> std::optional<Kernel> { return char_interval_power(n * k.power); },
                        [n](const Kdelta& k) -> std::optional<Kernel> {
                          return kdelta(k.delta, k.scale * std::pow(static_cast<double>(n), 1.0 / k.delta));
                        },
                        [n](const Subordinated& k) -> std::optional<Kernel> {
                          auto p = k.base->analytic_power(n);
                          if (!p) return std::nullopt;
                          return subordinated(*p);
                        },
                        [](const Sampled&) -> std::optional<Kernel> { return std::nullopt; },
                    },
                    v_);
}

Kernel Kernel::power(int n, const Grid& grid) const {
  if (auto p = analytic_power(n)) return *p;
  return sampled(convolution_power(sample(*this, grid), n));
}

std::optional<Kernel> Kernel::analytic_convolution(const Kernel& other) const {
  if (const auto* a = std::get_if<Jalpha>(&v_)) {
    if (const auto* b = std::get_if<Jalpha>(&other.v_)) return jalpha(a->alpha + b->alpha);
  }
  if (const auto* a = std::get_if<CharInterval>(&v_)) {
    if (const auto* b = std::get_if<CharInterval>(&other.v_)) return char_interval_power(a->power + b->power);
  }
  if (const auto* a = std::get_if<Kdelta>(&v_)) {
    if (const auto* b = std::get_if<Kdelta>(&other.v_); b && b->delta == a->delta) {
      const double s = std::pow(std::pow(a->scale, a->delta) + std::pow(b->scale, a->delta), 1.0 / a->delta);
      return kdelta(a->delta, s);
    }
  }
  return std::nullopt;
}

std::string Kernel::spec() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const Jalpha& k) { os << "jalpha:" << k.alpha; },
                 [&](const CharInterval& k) {
                   os << "chi01";
                   if (k.power != 1) os << '^' << k.power;
                 },
                 [&](const Kdelta& k) {
                   os << "kdelta:" << k.delta;
                   if (k.scale != 1.0) os << '@' << k.scale;
                 },
                 [&](const Subordinated& k) { os << "subord:" << k.base->spec(); },
                 [&](const Sampled&) { os << "sampled"; },
             },
             v_);
  return os.str();
}

GridFunction sample(const Kernel& k, const Grid& grid) {
  std::vector<cplx> v(grid.size());
  const auto e = k.origin_exponent();
  const auto nn = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t ii = 0; ii < nn; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    v[i] = (i == 0 && e && *e < 0.0) ? 0.0 : k(grid.node(i));
  }
  GridFunction g(grid, std::move(v));
  if (k.support_end()) {
    if (auto s = g.detect_support()) g = g.with_support(*s);
  }
  return g.with_origin_exponent(e ? *e : 0.0).with_source(std::make_shared<const Kernel>(k));
}

cplx kernel_laplace(const Kernel& k, cplx lambda) { return k.laplace(lambda); }

GridFunction subordinate(const Kernel& k, const Grid& grid) {
  if (const auto* s = std::get_if<Sampled>(&k.variant())) {
    const auto& g = *s->samples;
    const double reach = 2.0 * std::sqrt(grid.length()) * kUStar;
    if (g[g.size() - 1] != cplx{} && g.grid().length() < reach) {
      throw DomainError("sampled kernel support exceeds the subordination truncation range");
    }
  }
  return sample(Kernel::subordinated(k), grid);
}

Kernel parse_kernel(std::string_view spec) {
  const std::string s(spec);
  auto number = [&](std::string_view body) {
    try {
      std::size_t used = 0;
      const double x = std::stod(std::string(body), &used);
      if (used != body.size()) throw UsageError("bad number in kernel spec: " + s);
      return x;
    } catch (const std::logic_error&) {
      throw UsageError("bad number in kernel spec: " + s);
    }
  };
  try {
    if (s.rfind("jalpha:", 0) == 0) return Kernel::jalpha(number(spec.substr(7)));
    if (s == "chi01") return Kernel::chi01();
    if (s.rfind("chi01^", 0) == 0) return Kernel::char_interval_power(static_cast<int>(number(spec.substr(6))));
    if (s.rfind("kdelta:", 0) == 0) {
      const auto body = spec.substr(7);
      const auto at = body.find('@');
      if (at == std::string_view::npos) return Kernel::kdelta(number(body));
      return Kernel::kdelta(number(body.substr(0, at)), number(body.substr(at + 1)));
    }
    if (s.rfind("subord:", 0) == 0) return Kernel::subordinated(parse_kernel(spec.substr(7)));
    if (s.rfind("file:", 0) == 0) {
      const std::string path = s.substr(5);
      std::ifstream in(path);
      if (!in) throw UsageError("cannot open kernel file: " + path);
      return Kernel::sampled(read_csv(in));
    }
  } catch (const DomainError& e) {
    throw UsageError(std::string(e.what()) + " (spec '" + s + "')");
  }
  throw UsageError("unknown kernel spec: " + s);
}

}  // namespace ccf
