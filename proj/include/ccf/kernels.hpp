#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ccf/grid.hpp"

namespace ccf {

/// Riemann-Liouville kernel j_alpha(t) = t^(alpha-1) / Gamma(alpha).
struct Jalpha {
  double alpha;
};

/// n-fold convolution power of the indicator of (0, 1): the cardinal B-spline
/// of order n supported on [0, n]. power == 1 is chi_(0,1) itself.
struct CharInterval {
  int power = 1;
};

/// One-sided stable density with Laplace transform exp(-(scale*lambda)^delta).
/// scale == 1 is K_delta; scale = n^(1/delta) gives its n-th convolution power.
struct Kdelta {
  double delta;
  double scale = 1.0;
};

class Kernel;

/// Weierstrass-subordinated kernel of `base`.
struct Subordinated {
  std::shared_ptr<const Kernel> base;
};

/// Kernel known only by samples; evaluated by linear interpolation.
struct Sampled {
  std::shared_ptr<const GridFunction> samples;
};

/// Locally integrable kernel on [0, inf). Immutable value type.
class Kernel {
 public:
  using Variant = std::variant<Jalpha, CharInterval, Kdelta, Subordinated, Sampled>;

  static Kernel jalpha(double alpha);
  static Kernel chi01();
  static Kernel char_interval_power(int n);
  static Kernel kdelta(double delta, double scale = 1.0);
  static Kernel subordinated(const Kernel& base);
  static Kernel sampled(GridFunction samples);

  const Variant& variant() const noexcept { return v_; }

  /// Value at t; zero for t < 0. Singular points return +inf.
  double operator()(double t) const;

  /// Leading power e in k(t) ~ c*t^e near t = 0; nullopt when k vanishes to
  /// infinite order there (K_delta).
  std::optional<double> origin_order() const;
  /// origin_order() when it is not a non-negative integer (k is not smooth at 0).
  std::optional<double> origin_exponent() const;
  /// Sorted points in (lo, hi) where k or one of its derivatives jumps.
  std::vector<double> breakpoints(double lo, double hi) const;
  /// Right end of the support when bounded.
  std::optional<double> support_end() const;

  /// Closed-form Laplace transform (numeric truncated transform for Sampled).
  cplx laplace(cplx lambda) const;

  /// n-fold convolution power when a closed form exists.
  std::optional<Kernel> analytic_power(int n) const;
  /// n-fold power; falls back to numeric convolution on `grid`.
  Kernel power(int n, const Grid& grid) const;
  /// k * other when a closed form exists (j_a * j_b = j_(a+b)).
  std::optional<Kernel> analytic_convolution(const Kernel& other) const;

  bool is_sampled() const noexcept { return std::holds_alternative<Sampled>(v_); }
  std::string spec() const;

 private:
  explicit Kernel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Node values of k on the grid. Singular origins are stored as 0 and flagged
/// through origin_exponent(); jump nodes of chi_(0,1) take the mean of the
/// one-sided limits.
GridFunction sample(const Kernel& k, const Grid& grid);

/// Closed-form transform; throws DomainError when Re(lambda) <= 0 for a
/// non-integer j_alpha.
cplx kernel_laplace(const Kernel& k, cplx lambda);

/// Samples of the Weierstrass transform
///   k~(t) = int_0^inf s exp(-s^2/4t) / (2 sqrt(pi) t^(3/2)) k(s) ds.
GridFunction subordinate(const Kernel& k, const Grid& grid);

/// Kernel spec strings: jalpha:<a>, chi01, kdelta:<d>, subord:<spec>, file:<csv>.
Kernel parse_kernel(std::string_view spec);

namespace detail {
double kdelta_series(double delta, double t, int terms);
double kdelta_contour(double delta, double t);
/// log K_delta(t) from the contour form; finite where the density underflows.
double kdelta_log_contour(double delta, double t);
/// Time above which the fixed-length series is used for K_delta.
double kdelta_crossover(double delta);
/// Cardinal B-spline of order n (n >= 1) at t, away from its knots.
double bspline(int n, double t);
}  // namespace detail

}  // namespace ccf
