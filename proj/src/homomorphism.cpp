#include "ccf/homomorphism.hpp"

#include <cmath>

#include "ccf/errors.hpp"
#include "ccf/extend.hpp"
#include "ccf/gridfn.hpp"

namespace ccf {

Integrand::Integrand(Sampler derivs, double support_end) : derivs_(std::move(derivs)), b_(support_end) {}

Integrand Integrand::bump(const TestFunction& f, int shift) {
  return Integrand([f, shift](int n, const Grid& g) { return f.sample(g, n + shift); }, f.b());
}

Integrand Integrand::cosine_product(const TestFunction& phi, const TestFunction& psi) {
  auto d = [phi, psi](int n, const Grid& g) {
    const auto p0 = phi.sample(g);
    const auto q0 = psi.sample(g);
    auto conv = convolve(p0, psi.sample(g, n), QuadratureRule::trapezoid);
    for (int j = 0; j < n; ++j) conv += phi.sample(g, n - 1 - j) * cplx(psi.derivative(j, 0.0));
    const auto d1 = dual_convolve(p0, psi.sample(g, n), QuadratureRule::trapezoid);
    const auto d2 = dual_convolve(q0, phi.sample(g, n), QuadratureRule::trapezoid);
    return (conv + d1 + d2) * cplx(0.5);
  };
  return Integrand(d, phi.b() + psi.b());
}

Integrand Integrand::combination(cplx a, const Integrand& f, cplx b, const Integrand& g) {
  return Integrand([a, f, b, g](int n, const Grid& grid) { return f.derivative(n, grid) * a + g.derivative(n, grid) * b; },
                   std::max(f.support_end(), g.support_end()));
}

GridFunction weyl_integrand(double beta, const Integrand& f, const Grid& grid) {
  if (!(beta > 0.0)) throw DomainError("Weyl order must be positive");
  const bool whole = std::abs(beta - std::round(beta)) < 1e-12;
  const int m = whole ? static_cast<int>(std::round(beta)) : static_cast<int>(std::ceil(beta));
  const cplx sign = m % 2 ? -1.0 : 1.0;
  const auto d = f.derivative(m, grid);
  if (whole) return d * sign;
  return dual_convolve(Kernel::jalpha(m - beta), d) * sign;
}

CalculusContext::CalculusContext(const Kernel& k, DiagonalGenerator gen, double tau, std::size_t cells, int n_max)
    : k_(k), tau_(tau), cells_(cells) {
  const auto* j = std::get_if<Jalpha>(&k.variant());
  if (!j) throw UnsupportedKernel("the calculus needs a j_alpha kernel, got " + k.spec());
  alpha_ = j->alpha;
  if (n_max < 1) throw UsageError("n_max must be >= 1");
  if (!(tau > 0.0) || cells < 4) throw UsageError("calculus grid needs tau > 0 and at least 4 cells");
  auto base = convolve_family(base_cosine(gen, Grid(tau, cells)), k);
  if (base.log_scale()) throw UsageError("the calculus needs a linear-scale table");
  tables_ = extend_all(base, k, n_max - 1, PowerMode::analytic);
}

const PropagatorTable& CalculusContext::table(int n) const {
  if (n < 1 || n > n_max()) throw DomainError("no extended table for power " + std::to_string(n));
  return tables_[static_cast<std::size_t>(n - 1)];
}

int CalculusContext::power_for(double support_end) const {
  const int n = std::max(1, static_cast<int>(std::ceil(support_end / tau_ - 1e-9)));
  if (n > n_max())
    throw DomainError("support end " + std::to_string(support_end) + " exceeds n_max * tau = " +
                      std::to_string(n_max() * tau_));
  return n;
}

std::vector<cplx> calculus_apply(const CalculusContext& ctx, const Integrand& f, std::optional<int> n) {
  const int p = n ? *n : ctx.power_for(f.support_end());
  if (p * ctx.tau() < f.support_end() - 1e-9 * ctx.tau()) throw DomainError("power too small for the support");
  const auto& table = ctx.table(p);
  const auto w = weyl_integrand(p * ctx.alpha(), f, table.grid());
  std::vector<cplx> out(table.modes());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = pairing(w, table.column(m));
  return out;
}

std::vector<cplx> calculus_apply(const CalculusContext& ctx, const TestFunction& f) {
  return calculus_apply(ctx, Integrand::bump(f));
}

double multiplicativity_residual(const CalculusContext& ctx, const TestFunction& phi, const TestFunction& psi) {
  const auto lhs = calculus_apply(ctx, Integrand::cosine_product(phi, psi));
  const auto a = calculus_apply(ctx, phi);
  const auto b = calculus_apply(ctx, psi);
  double worst = 0.0;
  for (std::size_t m = 0; m < lhs.size(); ++m) worst = std::max(worst, std::abs(lhs[m] - a[m] * b[m]));
  return worst;
}

double generator_residual(const CalculusContext& ctx, const TestFunction& f) {
  const int n = ctx.power_for(f.b());
  const auto c = calculus_apply(ctx, Integrand::bump(f), n);
  const auto c2 = calculus_apply(ctx, Integrand::bump(f, 2), n);
  const double d0 = f.derivative(1, 0.0);
  double worst = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) {
    const cplx a = ctx.generator()[m];
    worst = std::max(worst, std::abs(a * a * c[m] - c2[m] - d0));
  }
  return worst;
}

double kernel_smoothing_invariance(const CalculusContext& ctx, const Kernel& l, const TestFunction& f) {
  const auto* j = std::get_if<Jalpha>(&l.variant());
  if (!j) throw UnsupportedKernel("smoothing kernel must be j_beta, got " + l.spec());
  const CalculusContext other(Kernel::jalpha(ctx.alpha() + j->alpha), ctx.generator(), ctx.tau(), ctx.cells(),
                              ctx.power_for(f.b()));
  const auto a = calculus_apply(ctx, f);
  const auto b = calculus_apply(other, f);
  double worst = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) worst = std::max(worst, std::abs(a[m] - b[m]));
  return worst;
}

double well_definedness(const CalculusContext& ctx, const TestFunction& f) {
  const int n = ctx.power_for(f.b());
  if (n + 1 > ctx.n_max()) throw UsageError("well-definedness check needs n_max >= " + std::to_string(n + 1));
  const auto a = calculus_apply(ctx, Integrand::bump(f), n);
  const auto b = calculus_apply(ctx, Integrand::bump(f), n + 1);
  double worst = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) worst = std::max(worst, std::abs(a[m] - b[m]));
  return worst;
}

double nondegeneracy_margin(const CalculusContext& ctx, const std::vector<TestFunction>& thetas) {
  std::vector<double> best(ctx.generator().size(), 0.0);
  for (const auto& t : thetas) {
    const auto c = calculus_apply(ctx, t);
    for (std::size_t m = 0; m < c.size(); ++m) best[m] = std::max(best[m], std::abs(c[m]));
  }
  return *std::min_element(best.begin(), best.end());
}

}  // namespace ccf
