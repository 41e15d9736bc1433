#include "ccf/extend.hpp"

#include <cmath>

#include "ccf/errors.hpp"
#include "ccf/gridfn.hpp"
#include "ccf/quadrature.hpp"

namespace ccf {

namespace {

struct StepLayout {
  std::size_t J;   // cells per nu
  std::size_t nJ;  // cells of prev
  Grid out;
};

StepLayout validate(const ExtensionInput& in) {
  if (in.n < 1) throw UsageError("extension step needs n >= 1");
  if (in.base.log_scale() || in.prev.log_scale()) throw UsageError("extension needs linear-scale tables");
  if (!(in.base.generator() == in.prev.generator())) throw ShapeError("generator mismatch between base and prev");
  if (!in.base.grid().same_step(in.prev.grid())) throw ShapeError("base and prev use different steps");
  const auto J = in.base.grid().index_of(in.nu);
  if (!J || *J == 0) throw UsageError("nu is not a positive multiple of the grid step");
  if (*J != in.base.grid().intervals()) throw ShapeError("base table must cover exactly [0, nu]");
  const std::size_t nJ = static_cast<std::size_t>(in.n) * *J;
  if (in.prev.grid().intervals() != nJ) throw ShapeError("prev table must cover exactly [0, n nu]");
  return {*J, nJ, in.base.grid().with_intervals(nJ + *J)};
}

// Second branch at node nJ + sigma, all modes.
struct SecondBranch {
  const ExtensionInput& in;
  const StepLayout& lay;
  const quad::KernelQuadrature& kq_k;
  const quad::KernelQuadrature& kq_n;
  const std::vector<quad::Factor>& fp;
  const std::vector<quad::Factor>& fb;
  int drop;

  cplx operator()(std::size_t m, std::size_t sigma) const {
    using quad::Orientation;
    const long nJ = static_cast<long>(lay.nJ);
    const long s = static_cast<long>(sigma);
    const cplx t1 = 2.0 * in.prev.column(m)[lay.nJ] * in.base.column(m)[sigma];
    const cplx t2 = kq_k.integrate(fp[m], Orientation::reversed, nJ + s, 0, lay.nJ);
    const cplx t3 = kq_n.integrate(fb[m], Orientation::reversed, nJ + s, 0, sigma);
    const cplx t4 = kq_k.integrate(fp[m], Orientation::forward, s - nJ, lay.nJ - sigma, lay.nJ);
    const cplx t5 = kq_n.integrate(fb[m], Orientation::forward, nJ - s, 0, sigma);
    const cplx terms[5] = {t1, t2, t3, -t4, -t5};
    cplx r{};
    for (int j = 0; j < 5; ++j) {
      if (drop != j + 1) r += terms[j];
    }
    return r;
  }
};

std::vector<quad::Factor> factors(const PropagatorTable& t) {
  std::vector<quad::Factor> f;
  for (std::size_t m = 0; m < t.modes(); ++m) f.emplace_back(t.column(m));
  return f;
}

Kernel next_power(const Kernel& k, const Kernel& k_n, const Grid& grid) {
  if (auto c = k.analytic_convolution(k_n)) return *c;
  return Kernel::sampled(convolve(k, sample(k_n, grid)));
}

Kernel nth_power(const Kernel& k, int n, PowerMode mode, const Grid& grid) {
  if (n == 1) return k;
  if (mode == PowerMode::analytic) {
    auto p = k.analytic_power(n);
    if (!p) throw UnsupportedKernel("no closed-form power for kernel " + k.spec());
    return *p;
  }
  return Kernel::sampled(convolution_power(sample(k, grid), n));
}

}  // namespace

PropagatorTable extend_step(const ExtensionInput& in, const ExtendOptions& opt) {
  const auto lay = validate(in);
  const double h = lay.out.step();
  const std::size_t total = lay.out.intervals();
  const quad::KernelQuadrature kq_k(in.k, h, total);
  const quad::KernelQuadrature kq_n(in.k_n, h, total);
  const auto fp = factors(in.prev);
  const auto fb = factors(in.base);
  const SecondBranch second{in, lay, kq_k, kq_n, fp, fb, opt.drop_term};

  std::vector<GridFunction> cols;
  for (std::size_t m = 0; m < in.prev.modes(); ++m) {
    const auto first = kq_k.convolve(in.prev.column(m), Backend::serial);
    std::vector<cplx> v(lay.out.size());
    for (std::size_t i = 0; i <= lay.nJ; ++i) v[i] = first[i];
    const auto J = static_cast<std::ptrdiff_t>(lay.J);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t ss = 1; ss <= J; ++ss) {
      const auto sigma = static_cast<std::size_t>(ss);
      v[lay.nJ + sigma] = second(m, sigma);
    }
    cols.push_back(GridFunction(lay.out, std::move(v)).with_origin_exponent(first.origin_exponent()));
  }
  return PropagatorTable(in.base.generator(), next_power(in.k, in.k_n, lay.out), lay.out, std::move(cols));
}

double seam_mismatch(const ExtensionInput& in) {
  const auto lay = validate(in);
  const double h = lay.out.step();
  const quad::KernelQuadrature kq_k(in.k, h, lay.out.intervals());
  const quad::KernelQuadrature kq_n(in.k_n, h, lay.out.intervals());
  const auto fp = factors(in.prev);
  const auto fb = factors(in.base);
  const SecondBranch second{in, lay, kq_k, kq_n, fp, fb, 0};
  double worst = 0.0;
  for (std::size_t m = 0; m < in.prev.modes(); ++m) {
    const auto first = kq_k.convolve(in.prev.column(m), Backend::serial);
    worst = std::max(worst, std::abs(first[lay.nJ] - second(m, 0)));
  }
  return worst;
}

std::vector<PropagatorTable> extend_all(const PropagatorTable& base, const Kernel& k, int n_max, PowerMode mode,
                                        const ExtendOptions& opt) {
  if (n_max < 0) throw UsageError("n_max must be >= 0");
  const double nu = base.grid().length();
  const Grid full = base.grid().with_intervals(base.grid().intervals() * static_cast<std::size_t>(n_max + 1));
  std::vector<PropagatorTable> out{base};
  for (int n = 1; n <= n_max; ++n) {
    const ExtensionInput in{base, out.back(), k, nth_power(k, n, mode, full), nu, n};
    out.push_back(extend_step(in, opt));
  }
  return out;
}

PropagatorTable extend_full(const PropagatorTable& base, const Kernel& k, int n_max, PowerMode mode,
                            const ExtendOptions& opt) {
  return extend_all(base, k, n_max, mode, opt).back();
}

PropagatorTable fractional_extend(const PropagatorTable& base, double alpha, int n_max) {
  return extend_full(base, Kernel::jalpha(alpha), n_max, PowerMode::analytic);
}

PropagatorTable iterate_doubling(const PropagatorTable& base, const Kernel& k, int m, PowerMode mode) {
  if (m < 0) throw UsageError("doubling count must be >= 0");
  PropagatorTable cur = base;
  Kernel kc = k;
  for (int i = 0; i < m; ++i) {
    const ExtensionInput in{cur, cur, kc, kc, cur.grid().length(), 1};
    cur = extend_step(in);
    if (i + 1 < m) kc = nth_power(kc, 2, mode, cur.grid().with_intervals(2 * cur.grid().intervals()));
  }
  return cur;
}

double iterated_vs_one_shot(const PropagatorTable& base, const Kernel& k, int m, PowerMode mode) {
  const auto a = iterate_doubling(base, k, m, mode);
  const auto b = extend_full(base, k, (1 << m) - 1, mode);
  double worst = 0.0;
  for (std::size_t j = 0; j < a.modes(); ++j) worst = std::max(worst, max_abs_diff(a.column(j), b.column(j)));
  return worst;
}

}  // namespace ccf
