#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ccf/grid.hpp"
#include "ccf/kernels.hpp"
#include "ccf/parallel.hpp"

namespace ccf::quad {

/// Nodes and weights on [0, 1] for integrands carrying the factor
/// xi^left * (1 - xi)^right. The weights are divided by that factor, so the
/// rule is applied to the full integrand. Rules are cached and shared.
struct CellRule {
  std::vector<double> x;
  std::vector<double> w;
};
const CellRule& cell_rule(double left, double right, int points);

/// Power-law singular point of an integrand (position in the integration variable).
struct Singularity {
  double at;
  double exponent;
};

/// Integrals of f(r)*(1 - xi) and f(r)*xi over [a, a + h], xi = (r - a)/h.
struct HatMoments {
  double left = 0.0;
  double right = 0.0;
};

/// Hat moments of a real integrand that may be singular at the listed points and
/// non-smooth at the listed breakpoints. Singular points at the cell ends are
/// absorbed into a Gauss-Jacobi weight; interior ones split the cell.
template <class F>
HatMoments hat_moments(F&& f, double a, double h, std::span<const Singularity> sing, std::span<const double> breaks);
/// Moments over [lo, hi] inside the cell, still relative to the full hat pair.
template <class F>
HatMoments hat_moments_range(F&& f, double a, double h, double lo, double hi, std::span<const Singularity> sing,
                             std::span<const double> breaks);
/// hat_moments with bisection until halves agree; for steep smooth integrands.
template <class F>
HatMoments hat_moments_adaptive(F&& f, double a, double h, std::span<const Singularity> sing,
                                std::span<const double> breaks, double abs_tol);

/// Decomposition u(r) = r^gamma * v(r) used for grid factors with a fractional
/// origin behaviour (non-integer gamma < 1). Otherwise v = u.
class Factor {
 public:
  explicit Factor(const GridFunction& u);
  bool factorized() const noexcept { return factorized_; }
  double gamma() const noexcept { return gamma_; }
  std::size_t size() const noexcept { return v_.size(); }
  cplx operator[](std::size_t j) const noexcept { return v_[j]; }
  std::span<const cplx> values() const noexcept { return v_; }

 private:
  bool factorized_ = false;
  double gamma_ = 0.0;
  std::vector<cplx> v_;
};

/// True when gamma needs the factorized interpolant.
bool needs_factorization(double gamma) noexcept;

enum class Orientation {
  forward,   // kernel argument x = r + c
  reversed,  // kernel argument x = c - r
};

/// Product integration against an analytic kernel on a uniform grid:
///   int w(x(r)) u(r) dr, u replaced by its (possibly factorized) linear
///   interpolant and w integrated exactly cell by cell.
///
/// Moments of w against the two hat halves are tabulated once per x-cell, so
/// regular factors reduce to a weighted discrete convolution.
class KernelQuadrature {
 public:
  KernelQuadrature(Kernel w, double h, std::size_t cells);

  const Kernel& kernel() const noexcept { return w_; }
  double step() const noexcept { return h_; }
  std::size_t cells() const noexcept { return left_.size(); }
  double left(std::size_t q) const { return left_.at(q); }
  double right(std::size_t q) const { return right_.at(q); }

  /// int over [r_{j_lo}, r_{j_hi}] of w(x(r)) u(r) dr with x = r + c*h (forward)
  /// or x = c*h - r (reversed).
  cplx integrate(const Factor& u, Orientation o, long c, std::size_t j_lo, std::size_t j_hi) const;

  /// Same integral with the second factor a kernel evaluated exactly.
  double integrate_pair(const Kernel& k, Orientation o, long c, std::size_t j_lo, std::size_t j_hi) const;

  /// (w * u)(t_i) for every node of u.
  GridFunction convolve(const GridFunction& u, Backend backend = Backend::automatic) const;
  /// (w o u)(t_i) = int_{t_i}^{T} w(s - t_i) u(s) ds for every node of u.
  GridFunction dual(const GridFunction& u, Backend backend = Backend::automatic) const;

 private:
  HatMoments factorized_cell(double gamma, Orientation o, long c, std::size_t j) const;
  template <class F>
  HatMoments mapped_cell(F&& f, Orientation o, long c, std::size_t j, std::span<const Singularity> extra_sing,
                         std::span<const double> extra_breaks) const;

  Kernel w_;
  double h_;
  std::vector<double> left_;
  std::vector<double> right_;
  std::vector<double> breaks_;  // kernel breakpoints in (0, cells*h), x-variable
};

/// int_{r_lo}^{r_hi} u(r) dr with the same interpolant as KernelQuadrature.
cplx integrate(const Factor& u, double h, std::size_t j_lo, std::size_t j_hi);

}  // namespace ccf::quad

#include "ccf/quadrature_impl.hpp"
