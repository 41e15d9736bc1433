#include "ccf/gridfn.hpp"

#include <cmath>

#include "ccf/errors.hpp"
#include "ccf/quadrature.hpp"

namespace ccf {

namespace {

void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) throw ShapeError("grid mismatch");
}

double product_exponent(double a, double b, double shift) {
  const double g = a + b + shift;
  return quad::needs_factorization(g) ? g : 0.0;
}

// Zeroes every node below `lo` and records [lo, M] as the support.
GridFunction clip_below(GridFunction r, std::size_t lo) {
  if (lo == 0) return r;
  const double gamma = r.origin_exponent();
  std::vector<cplx> v(r.values().begin(), r.values().end());
  if (lo >= v.size()) return GridFunction::zeros(r.grid());
  for (std::size_t i = 0; i < lo; ++i) v[i] = 0.0;
  return GridFunction(r.grid(), std::move(v), Support{lo, r.size() - 1}).with_origin_exponent(gamma);
}

}  // namespace

GridFunction convolve(const Kernel& k, const GridFunction& g, Backend backend) {
  const auto& grid = g.grid();
  return quad::KernelQuadrature(k, grid.step(), grid.intervals()).convolve(g, backend);
}

GridFunction convolve(const GridFunction& f, const GridFunction& g, QuadratureRule rule, Backend backend) {
  require_same_grid(f, g);
  const std::size_t lo = (f.support() && g.support()) ? f.support()->lo + g.support()->lo : 0;
  if (rule != QuadratureRule::trapezoid) {
    if (f.source()) return clip_below(convolve(*f.source(), g, backend), lo);
    if (g.source()) return clip_below(convolve(*g.source(), f, backend), lo);
    if (rule == QuadratureRule::product) throw UsageError("product integration needs a factor sampled from a kernel");
  }
  const std::size_t n = f.size();
  const double h = f.grid().step();
  auto c = discrete_convolution(f.values(), g.values(), n, backend);
  for (std::size_t i = 0; i < n; ++i) c[i] = h * (c[i] - 0.5 * f[i] * g[0] - 0.5 * f[0] * g[i]);
  c[0] = 0.0;
  GridFunction r(f.grid(), std::move(c));
  return clip_below(r.with_origin_exponent(product_exponent(f.origin_exponent(), g.origin_exponent(), 1.0)), lo);
}

GridFunction dual_convolve(const Kernel& k, const GridFunction& g, Backend backend) {
  const auto& grid = g.grid();
  return quad::KernelQuadrature(k, grid.step(), grid.intervals()).dual(g, backend);
}

GridFunction dual_convolve(const GridFunction& f, const GridFunction& g, QuadratureRule rule, Backend backend) {
  require_same_grid(f, g);
  if (rule != QuadratureRule::trapezoid && f.source()) return dual_convolve(*f.source(), g, backend);
  if (rule == QuadratureRule::product) throw UsageError("product integration needs the kernel slot sampled from a kernel");
  const std::size_t n = f.size();
  const std::size_t last = n - 1;
  const double h = f.grid().step();
  const std::size_t hi = g.support() ? g.support()->hi : last;
  std::vector<cplx> rev(n);
  for (std::size_t k = 0; k < n; ++k) rev[k] = g[last - k];
  const auto c = discrete_convolution(rev, f.values(), n, backend);
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = h * (c[last - i] - 0.5 * f[0] * g[i] - 0.5 * f[last - i] * g[last]);
  out[last] = 0.0;
  for (std::size_t i = hi + 1; i < n; ++i) out[i] = 0.0;
  GridFunction r(f.grid(), std::move(out));
  if (g.support()) r = r.with_support(Support{0, hi});
  return r;
}

GridFunction cosine_convolve(const GridFunction& f, const GridFunction& g, Backend backend) {
  auto r = convolve(f, g, QuadratureRule::automatic, backend);
  r += dual_convolve(f, g, QuadratureRule::automatic, backend);
  r += dual_convolve(g, f, QuadratureRule::automatic, backend);
  return r * cplx(0.5);
}

GridFunction convolution_power(const GridFunction& k, int n, Backend backend) {
  if (n < 1) throw UsageError("convolution power needs n >= 1 (no discrete delta)");
  GridFunction r = k;
  for (int i = 1; i < n; ++i) r = convolve(k, r, QuadratureRule::automatic, backend);
  return r;
}

GridFunction antiderivative(const GridFunction& f) { return convolve(Kernel::jalpha(1.0), f); }

GridFunction second_antiderivative(const GridFunction& f) { return convolve(Kernel::jalpha(2.0), f); }

GridFunction derivative(const GridFunction& f, int order) {
  if (order != 1 && order != 2) throw UsageError("derivative order must be 1 or 2");
  const std::size_t n = f.size();
  const double h = f.grid().step();
  std::vector<cplx> d(n);
  if (order == 1) {
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  } else {
    const double h2 = h * h;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    if (n >= 4) {
      d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
      d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    } else {
      d[0] = d[1];
      d[n - 1] = d[n - 2];
    }
  }
  return GridFunction(f.grid(), std::move(d));
}

cplx laplace_transform(const GridFunction& f, cplx lambda) {
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) throw DomainError("non-finite lambda");
  if (f.source()) {
    // Kernel samples: exact kernel moments against the interpolated exponential.
    const auto e = GridFunction::sample(f.grid(), [lambda](double t) { return std::exp(-lambda * t); });
    const quad::KernelQuadrature kq(*f.source(), f.grid().step(), f.grid().intervals());
    return kq.integrate(quad::Factor(e), quad::Orientation::forward, 0, 0, f.grid().intervals());
  }
  const auto w = f.map([lambda](cplx v, double t) { return v * std::exp(-lambda * t); });
  return quad::integrate(quad::Factor(w.with_origin_exponent(f.origin_exponent())), f.grid().step(), 0,
                         f.grid().intervals());
}

cplx integrate(const GridFunction& f) {
  return quad::integrate(quad::Factor(f), f.grid().step(), 0, f.grid().intervals());
}

cplx pairing(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  const auto p = f.map([&g, h = f.grid().step()](cplx v, double t) {
    return v * g[static_cast<std::size_t>(std::llround(t / h))];
  });
  return integrate(p.with_origin_exponent(product_exponent(f.origin_exponent(), g.origin_exponent(), 0.0)));
}

}  // namespace ccf
