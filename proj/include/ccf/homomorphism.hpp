#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ccf/propagator.hpp"
#include "ccf/weyl.hpp"

namespace ccf {

/// A function on [0, inf) with node samples of every derivative and a known
/// support end.
class Integrand {
 public:
  using Sampler = std::function<GridFunction(int order, const Grid& grid)>;
  Integrand(Sampler derivs, double support_end);

  /// f^(shift).
  static Integrand bump(const TestFunction& f, int shift = 0);
  /// phi *_c psi, derivatives from
  ///   D^n (phi * psi) = phi * psi^(n) + sum_{j<n} psi^(j)(0) phi^(n-1-j)
  ///   D^n (phi o psi) = phi o psi^(n)
  static Integrand cosine_product(const TestFunction& phi, const TestFunction& psi);
  /// a f + b g.
  static Integrand combination(cplx a, const Integrand& f, cplx b, const Integrand& g);

  GridFunction derivative(int order, const Grid& grid) const { return derivs_(order, grid); }
  double support_end() const noexcept { return b_; }

 private:
  Sampler derivs_;
  double b_;
};

/// W_{j_beta} f on the grid; f must vanish past the grid end.
GridFunction weyl_integrand(double beta, const Integrand& f, const Grid& grid);

/// Extended tables C_{j_{n alpha}} on [0, n tau] for n = 1..n_max.
class CalculusContext {
 public:
  /// k must be j_alpha.
  CalculusContext(const Kernel& k, DiagonalGenerator gen, double tau, std::size_t cells, int n_max);

  double alpha() const noexcept { return alpha_; }
  const Kernel& kernel() const noexcept { return k_; }
  const DiagonalGenerator& generator() const noexcept { return tables_.front().generator(); }
  double tau() const noexcept { return tau_; }
  std::size_t cells() const noexcept { return cells_; }
  int n_max() const noexcept { return static_cast<int>(tables_.size()); }
  double step() const noexcept { return tau_ / static_cast<double>(cells_); }
  /// C_{j_{n alpha}} on [0, n tau].
  const PropagatorTable& table(int n) const;
  /// Smallest n with supp f inside [0, n tau].
  int power_for(double support_end) const;

 private:
  Kernel k_;
  double alpha_;
  double tau_;
  std::size_t cells_;
  std::vector<PropagatorTable> tables_;
};

/// C(f)_m = int_0^{n tau} W_{j_{n alpha}} f(t) C_n(t)_m dt, n = power_for(f) unless given.
std::vector<cplx> calculus_apply(const CalculusContext& ctx, const Integrand& f, std::optional<int> n = std::nullopt);
std::vector<cplx> calculus_apply(const CalculusContext& ctx, const TestFunction& f);

/// max_m |C(phi *_c psi)_m - C(phi)_m C(psi)_m|.
double multiplicativity_residual(const CalculusContext& ctx, const TestFunction& phi, const TestFunction& psi);
/// max_m |a_m^2 C(f)_m - C(f'')_m - f'(0)|.
double generator_residual(const CalculusContext& ctx, const TestFunction& f);
/// max_m |C_{k*l}(f)_m - C_k(f)_m| for l = j_beta.
double kernel_smoothing_invariance(const CalculusContext& ctx, const Kernel& l, const TestFunction& f);
/// max_m |C(f) with power n - with power n + 1|; needs n + 1 <= n_max.
double well_definedness(const CalculusContext& ctx, const TestFunction& f);
/// min_m max_theta |C(theta)_m|.
double nondegeneracy_margin(const CalculusContext& ctx, const std::vector<TestFunction>& thetas);

}  // namespace ccf
