#pragma once

#include <string_view>
#include <vector>

#include "ccf/grid.hpp"
#include "ccf/kernels.hpp"

namespace ccf {

/// Polynomial bump f(t) = c (t - a)^p (b - t)^p on [a, b], zero elsewhere.
/// Restricted to [0, inf); a < 0 is allowed and gives a bump that is nonzero
/// at the origin. c defaults to unit mass over [a, b].
class TestFunction {
 public:
  TestFunction(double a, double b, int p = 4, double mass = 1.0);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  int degree() const noexcept { return p_; }

  double operator()(double t) const { return derivative(0, t); }
  /// n-th derivative in closed form (any n >= 0).
  double derivative(int n, double t) const;

  /// Node values of f^(order), with a support hint.
  GridFunction sample(const Grid& grid, int order = 0) const;

  /// "a,b,p" or "bump:a,b,p".
  static TestFunction parse(std::string_view spec);

 private:
  double a_, b_;
  int p_;
  double scale_;
  std::vector<double> poly_;  // coefficients of u^p (1 - u)^p in u = (t - a)/(b - a)
};

/// Right inverse W_k of T'_k for kernels with a closed form (j_alpha, chi01).
class WeylOperator {
 public:
  /// Throws UnsupportedKernel for other kernels.
  explicit WeylOperator(Kernel k);
  const Kernel& kernel() const noexcept { return k_; }

 private:
  Kernel k_;
};

/// T'_k(f) = k o f.
GridFunction t_prime(const Kernel& k, const GridFunction& f);

/// W_k f with exact derivatives of the bump.
GridFunction weyl_apply(const WeylOperator& w, const TestFunction& f, const Grid& grid);
/// W_k f with finite-difference derivatives.
GridFunction weyl_apply(const WeylOperator& w, const GridFunction& f);

/// max |T'_k(W_k f) - f| over the nodes.
double roundtrip_check(const Kernel& k, const TestFunction& f, const Grid& grid);
double roundtrip_check(const Kernel& k, const GridFunction& f);

}  // namespace ccf
