#include <cmath>
#include <random>
#include <sstream>

#include "ccf/closed_forms.hpp"
#include "ccf/errors.hpp"
#include "ccf/extend.hpp"
#include "ccf/gridfn.hpp"
#include "ccf/harness.hpp"
#include "ccf/homomorphism.hpp"
#include "ccf/propagator.hpp"
#include "ccf/weyl.hpp"

namespace ccf {

namespace {

struct Ladder {
  std::vector<std::size_t> cells;
  std::vector<double> steps;
};

Ladder make_ladder(const RunConfig& cfg, double length, std::size_t divisor = 1) {
  Ladder l;
  for (auto m : cfg.ladder) {
    if (m % divisor) throw UsageError("grid ladder rungs must be multiples of " + std::to_string(divisor));
    l.cells.push_back(m);
    l.steps.push_back(length / static_cast<double>(m / divisor));
  }
  return l;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::string fmt(cplx a) {
  if (a.imag() == 0.0) return fmt(a.real());
  if (a.real() == 0.0) return fmt(a.imag()) + "i";
  return fmt(a.real()) + (a.imag() < 0 ? "" : "+") + fmt(a.imag()) + "i";
}

std::vector<Kernel> kernels_or(const RunConfig& cfg, const std::vector<std::string>& fallback) {
  std::vector<Kernel> out;
  for (const auto& s : cfg.kernels.empty() ? fallback : cfg.kernels) out.push_back(parse_kernel(s));
  return out;
}

void stamp(Report& r, const RunConfig& cfg) {
  std::string ladder;
  for (auto m : cfg.ladder) ladder += (ladder.empty() ? "" : ",") + std::to_string(m);
  r.environment = {{"T", fmt(cfg.T)}, {"ladder", ladder}, {"generator", cfg.generator}};
  if (cfg.corrupt_convolution) r.environment.emplace_back("corrupt_convolution", "1");
  if (cfg.drop_term) r.environment.emplace_back("drop_term", std::to_string(cfg.drop_term));
}

double max_abs(const GridFunction& f) { return f.max_abs(); }

// Trapezoid sum of h * term(r) for r = lo..hi.
template <class F>
cplx trap(double h, std::size_t lo, std::size_t hi, F&& term) {
  if (hi <= lo) return 0.0;
  cplx s = 0.5 * (term(lo) + term(hi));
  for (std::size_t r = lo + 1; r < hi; ++r) s += term(r);
  return h * s;
}

// Convolution under test; the negative control shifts the result by one node.
GridFunction conv(const RunConfig& cfg, const GridFunction& f, const GridFunction& g) {
  auto c = convolve(f, g, QuadratureRule::trapezoid);
  if (!cfg.corrupt_convolution) return c;
  std::vector<cplx> v(c.size());
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = c[i - 1];
  return GridFunction(c.grid(), std::move(v));
}

GridFunction cconv(const RunConfig& cfg, const GridFunction& f, const GridFunction& g) {
  return (conv(cfg, f, g) + dual_convolve(f, g, QuadratureRule::trapezoid) +
          dual_convolve(g, f, QuadratureRule::trapezoid)) *
         cplx(0.5);
}

std::size_t node(const Grid& g, double t) {
  const auto i = g.index_of(t);
  if (!i) throw UsageError("probe time " + fmt(t) + " is not a grid node");
  return *i;
}

// Probe nodes as fractions of the window.
constexpr double kProbes[] = {0.125, 0.375, 0.5, 0.75, 1.0};

std::size_t probe(const Grid& g, double fraction) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(g.intervals())));
}

}  // namespace

Report run_identity_suite(const RunConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.suite = "identities";
  stamp(rep, cfg);
  const auto lad = make_ladder(cfg, cfg.T);
  const double s = cfg.T / 2.0;
  const TestFunction phi(-0.4 * s, 0.9 * s, 8), psi(-0.2 * s, 1.1 * s, 8);
  const std::size_t R = lad.cells.size();

  std::vector<double> d1(R), d2(R), d3(R), d4(R), d5(R), la(R), lb(R), lc(R), sq(R), chain(R), hom(R);
  std::vector<double> support_excess(R);
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double coef[5], phase[5];
  for (int k = 0; k < 5; ++k) coef[k] = unit(rng) / (k + 1), phase[k] = M_PI * (1.0 + unit(rng));

  for (std::size_t r = 0; r < R; ++r) {
    const Grid g(cfg.T, lad.cells[r]);
    const double h = g.step();
    auto P = [&](int n) { return phi.sample(g, n); };
    auto Q = [&](int n) { return psi.sample(g, n); };
    const cplx p0 = phi(0.0), q0 = psi(0.0), p1 = phi.derivative(1, 0.0), q1 = psi.derivative(1, 0.0);
    auto dual = [](const GridFunction& a, const GridFunction& b) { return dual_convolve(a, b, QuadratureRule::trapezoid); };

    d1[r] = max_abs(conv(cfg, P(1), Q(0)) - conv(cfg, P(0), Q(1)) - P(0) * q0 + Q(0) * p0);
    d2[r] = max_abs(dual(P(1), Q(0)) + Q(0) * p0 + dual(P(0), Q(1)));
    d3[r] = max_abs(dual(Q(0), P(1)) + P(0) * q0 + dual(Q(1), P(0)));
    d4[r] = max_abs(cconv(cfg, P(1), Q(0)) - (conv(cfg, P(0), Q(1)) - dual(P(0), Q(1)) - dual(Q(1), P(0))) * cplx(0.5) +
                    Q(0) * p0);
    d5[r] = max_abs(cconv(cfg, P(2), Q(0)) - cconv(cfg, P(0), Q(2)) - P(0) * q1 + Q(0) * p1);

    // Split identities for f = g = e^{-t}.
    const auto f = GridFunction::sample(g, [](double t) { return std::exp(-t); });
    const auto chi = GridFunction::sample(g, [](double) { return 1.0; });
    const auto F = conv(cfg, chi, f);
    double ea = 0.0, eb = 0.0, ec0 = 0.0;
    for (auto [tt, ss] : {std::pair{0.25, 0.5}, {0.5, 0.5}, {0.5, 1.0}, {0.75, 1.25}, {1.0, 1.0}}) {
      const std::size_t i = node(g, tt * s), j = node(g, ss * s);
      const cplx lhs = F[i] * F[j];
      const cplx a = trap(h, j, i + j, [&](std::size_t q) { return f[i + j - q] * F[q]; }) -
                     trap(h, 0, i, [&](std::size_t q) { return f[i + j - q] * F[q]; });
      const cplx b = trap(h, j - i, j, [&](std::size_t q) { return f[i + q - j] * F[q]; }) +
                     trap(h, 0, i, [&](std::size_t q) { return f[q + j - i] * F[q]; });
      ea = std::max(ea, std::abs(lhs - a));
      ec0 = std::max(ec0, std::abs(a - (1.0 - std::exp(-tt * s)) * (1.0 - std::exp(-ss * s))));
      eb = std::max(eb, std::abs(lhs - b));
    }
    la[r] = ea;
    lc[r] = ec0;
    lb[r] = eb;

    const auto rf = GridFunction::sample(g, [&](double t) {
      double v = 0.0;
      for (int k = 0; k < 5; ++k) v += coef[k] * std::cos((k + 1) * t + phase[k]);
      return v;
    });
    const auto RF = conv(cfg, chi, rf);
    const auto fF = rf.map([&](cplx v, double t) { return v * RF[node(g, t)]; });
    sq[r] = max_abs(RF.map([](cplx v, double) { return v * v; }) - antiderivative(fF) * cplx(2.0));

    // Weyl operators: support and the power chain.
    const TestFunction wf(0.2 * s, 0.9 * s, 6);
    double excess = 0.0;
    const auto fsup = wf.sample(g).detect_support();
    for (const auto& k : {Kernel::jalpha(0.5), Kernel::jalpha(1.0), Kernel::chi01()}) {
      const auto w = weyl_apply(WeylOperator(k), wf, g).detect_support();
      if (w && fsup && w->hi > fsup->hi) excess = std::max(excess, static_cast<double>(w->hi - fsup->hi));
    }
    support_excess[r] = excess;

    const TestFunction cf(0.2 * s, 1.4 * s, 10);
    double ec = 0.0;
    for (auto [al, m, n] : {std::tuple{0.5, 1, 2}, {0.5, 1, 3}, {0.5, 2, 3}, {1.0, 1, 2}}) {
      const auto lhs = weyl_apply(WeylOperator(Kernel::jalpha(m * al)), cf, g);
      const auto rhs = dual_convolve(Kernel::jalpha((n - m) * al), weyl_apply(WeylOperator(Kernel::jalpha(n * al)), cf, g));
      ec = std::max(ec, max_abs_diff(lhs, rhs));
    }
    chain[r] = ec;

    const auto hf = TestFunction(-0.3 * s, 0.9 * s, 8).sample(g), hg = TestFunction(0.1 * s, 1.0 * s, 8).sample(g);
    double eh = 0.0;
    for (const auto& k : {Kernel::jalpha(0.5), Kernel::chi01()}) {
      eh = std::max(eh, max_abs_diff(dual_convolve(k, dual(hf, hg)), dual(hf, dual_convolve(k, hg))));
    }
    hom[r] = eh;
  }

  const double lo = 1.7, hi = 2.3, fl = 1e-10;
  const std::string bumps = "phi=bump:" + fmt(phi.a()) + "," + fmt(phi.b()) + ",8 psi=bump:" + fmt(psi.a()) + "," +
                            fmt(psi.b()) + ",8";
  auto add = [&](const std::string& name, const std::string& anchor, const std::string& params,
                 const std::vector<double>& v) {
    add_ladder(rep, LadderSpec{name, anchor, params, 2.0, lo, hi, fl}, lad.cells, lad.steps, v);
  };
  add("derivative_star", "(phi' * psi)(t) = (phi * psi')(t) + psi(0) phi(t) - phi(0) psi(t)", bumps, d1);
  add("derivative_dual", "(phi' o psi)(t) = -phi(0) psi(t) - (phi o psi')(t)", bumps, d2);
  add("dual_derivative", "(psi o phi')(t) = -psi(0) phi(t) - (psi' o phi)(t)", bumps, d3);
  add("derivative_cosine", "(phi' *c psi)(t) = [phi * psi' - phi o psi' - psi' o phi](t)/2 - phi(0) psi(t)", bumps, d4);
  add("second_derivative_cosine", "(phi'' *c psi)(t) = (phi *c psi'')(t) + psi'(0) phi(t) - phi'(0) psi(t)", bumps, d5);
  add("product_split_forward",
      "(chi*g)(t) (chi*f)(s) = int_s^{t+s} g(t+s-r) (chi*f)(r) dr - int_0^t f(t+s-r) (chi*g)(r) dr", "f=g=exp(-t)", la);
  add("product_split_closed_form", "int_s^{t+s} g(t+s-r) (chi*f)(r) dr - int_0^t f(t+s-r) (chi*g)(r) dr = (1-e^{-t})(1-e^{-s})",
      "f=g=exp(-t)", lc);
  add("product_split_backward",
      "(chi*g)(t) (chi*f)(s) = int_{s-t}^s g(t+r-s) (chi*f)(r) dr + int_0^t f(r+s-t) (chi*g)(r) dr", "f=g=exp(-t)", lb);
  add("square_identity", "[(chi*f)(t)]^2 = 2 int_0^t f(r) (chi*f)(r) dr", "f=random cosine sum, seed 20240601", sq);
  add("weyl_power_chain", "W_{k^{*m}} f = k^{*(n-m)} o W_{k^{*n}} f", "k=j_alpha, alpha in {0.5,1}, f=bump", chain);
  add("dual_homomorphism", "T'_k(f o g) = f o T'_k(g)", "k in {jalpha:0.5, chi01}", hom);
  for (std::size_t r = 0; r < R; ++r) {
    rep.records.push_back(Record{"weyl_support", "supp f in [0, a] implies supp W_k f in [0, a]",
                                 "k in {jalpha:0.5, jalpha:1, chi01}", lad.cells[r], support_excess[r], 1.0,
                                 support_excess[r] <= 1.0, std::nullopt});
  }
  return rep;
}

Report run_duhamel_suite(const RunConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.suite = "duhamel";
  stamp(rep, cfg);
  const auto lad = make_ladder(cfg, cfg.T);
  const auto gen = DiagonalGenerator::parse(cfg.generator);
  for (const auto& k : kernels_or(cfg, {"jalpha:1", "jalpha:0.5", "chi01"})) {
    std::vector<std::vector<double>> v(gen.size(), std::vector<double>(lad.cells.size()));
    for (std::size_t r = 0; r < lad.cells.size(); ++r) {
      const Grid g(cfg.T, lad.cells[r]);
      const auto table = convolve_family(base_cosine(gen, g), k);
      for (std::size_t m = 0; m < gen.size(); ++m) {
        const auto res = duhamel_residuals(table, m);
        double worst = 0.0;
        for (double x : kProbes) worst = std::max(worst, res[probe(g, x)].real());
        v[m][r] = worst;
      }
    }
    for (std::size_t m = 0; m < gen.size(); ++m) {
      add_ladder(rep,
                 LadderSpec{"duhamel_residual", "a^2 int_0^t (t-s) C_k(s) ds = C_k(t) - (chi*k)(t)",
                            "k=" + k.spec() + " a=" + fmt(gen[m]), 2.0, 1.7, std::nullopt, 1e-11},
                 lad.cells, lad.steps, v[m]);
    }
  }
  return rep;
}

namespace {

cplx extension_oracle(const Kernel& k, int power, cplx a, double t) {
  if (const auto* j = std::get_if<Jalpha>(&k.variant())) return closed::jbeta_cosh(power * j->alpha, a, t);
  if (const auto* c = std::get_if<CharInterval>(&k.variant()); c && c->power == 1) return closed::bspline_cosh(power, a, t);
  throw UnsupportedKernel("no closed-form extension oracle for " + k.spec());
}

}  // namespace

Report run_extension_demo(const RunConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.suite = "extension";
  stamp(rep, cfg);
  const auto lad = make_ladder(cfg, cfg.T / 2.0, 2);
  const auto gen = DiagonalGenerator::parse(cfg.generator);
  const double nu = cfg.T / 2.0;
  const int n_max = 3;
  ExtendOptions opt;
  opt.drop_term = cfg.drop_term;
  for (const auto& k : kernels_or(cfg, {"jalpha:1", "jalpha:0.5", "chi01"})) {
    const std::size_t R = lad.cells.size();
    std::vector<double> err(R), seam(R), iter(R), duh(R);
    for (std::size_t r = 0; r < R; ++r) {
      const Grid g(nu, lad.cells[r] / 2);
      const auto base = convolve_family(base_cosine(gen, g), k);
      const auto tabs = extend_all(base, k, n_max, PowerMode::analytic, opt);
      double e = 0.0, sm = 0.0;
      for (int n = 0; n <= n_max; ++n) {
        const auto& t = tabs[static_cast<std::size_t>(n)];
        for (std::size_t m = 0; m < t.modes(); ++m) {
          for (std::size_t i = 0; i < t.grid().size(); ++i) {
            e = std::max(e, std::abs(t.column(m)[i] - extension_oracle(k, n + 1, gen[m], t.grid().node(i))));
          }
        }
        if (n >= 1) {
          const ExtensionInput in{base, tabs[static_cast<std::size_t>(n - 1)], k, *k.analytic_power(n), nu, n};
          sm = std::max(sm, seam_mismatch(in));
        }
      }
      err[r] = e;
      seam[r] = sm;
      iter[r] = iterated_vs_one_shot(base, k, 2, PowerMode::analytic);
      const auto& last = tabs.back();
      double d = 0.0;
      for (std::size_t m = 0; m < last.modes(); ++m) {
        const auto res = duhamel_residuals(last, m);
        for (double x : kProbes) d = std::max(d, res[probe(last.grid(), x)].real());
      }
      duh[r] = d;
    }
    const std::string p = "k=" + k.spec() + " nu=" + fmt(nu) + " n<=3";
    add_ladder(rep, {"extension_error", "C_{k^{*(n+1)}}(t) = (k^{*(n+1)} * cosh(a .))(t) on [0, (n+1) nu]", p, 2.0, 1.7,
                     std::nullopt, 1e-11},
               lad.cells, lad.steps, err);
    add_ladder(rep, {"seam_mismatch", "both branches agree at t = n nu", p, 2.0, 1.7, std::nullopt, 1e-11}, lad.cells,
               lad.steps, seam);
    add_ladder(rep, {"iterated_vs_one_shot", "two doubling steps = one extension to 4 nu", p, 2.0, 1.7, std::nullopt, 1e-11},
               lad.cells, lad.steps, iter);
    add_ladder(rep, {"extension_duhamel", "a^2 int_0^t (t-s) C(s) ds = C(t) - (chi*k^{*(n+1)})(t)", p, 2.0, 1.7,
                     std::nullopt, 1e-11},
               lad.cells, lad.steps, duh);
  }
  return rep;
}

Report run_calculus_suite(const RunConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.suite = "calculus";
  stamp(rep, cfg);
  const auto lad = make_ladder(cfg, cfg.T / 2.0, 2);
  const auto gen = DiagonalGenerator::parse(cfg.generator);
  const double tau = cfg.T / 2.0;
  const TestFunction b1(0.2 * tau, 0.8 * tau, 8), b2(0.5 * tau, 1.5 * tau, 8);
  const std::string bumps = "bumps [" + fmt(b1.a()) + "," + fmt(b1.b()) + "], [" + fmt(b2.a()) + "," + fmt(b2.b()) + "]";
  for (const auto& k : kernels_or(cfg, {"jalpha:1", "jalpha:0.5"})) {
    const std::size_t R = lad.cells.size();
    std::vector<double> mult(R), genr(R), well(R), sm1(R), sm2(R), margin(R);
    for (std::size_t r = 0; r < R; ++r) {
      const CalculusContext ctx(k, gen, tau, lad.cells[r] / 2, 3);
      mult[r] = std::max({multiplicativity_residual(ctx, b1, b1), multiplicativity_residual(ctx, b1, b2),
                          multiplicativity_residual(ctx, b2, b2)});
      genr[r] = std::max(generator_residual(ctx, b1), generator_residual(ctx, b2));
      well[r] = std::max(well_definedness(ctx, b1), well_definedness(ctx, b2));
      sm1[r] = std::max(kernel_smoothing_invariance(ctx, Kernel::jalpha(1.0), b1),
                        kernel_smoothing_invariance(ctx, Kernel::jalpha(1.0), b2));
      sm2[r] = std::max(kernel_smoothing_invariance(ctx, Kernel::jalpha(0.25), b1),
                        kernel_smoothing_invariance(ctx, Kernel::jalpha(0.25), b2));
      margin[r] = nondegeneracy_margin(ctx, {b1, b2, TestFunction(0.1 * tau, 0.5 * tau, 8)});
    }
    const std::string p = "k=" + k.spec() + " " + bumps;
    add_ladder(rep, {"multiplicativity", "C(phi *c psi) = C(phi) C(psi)", p, 2.0, 1.7, std::nullopt, 1e-11}, lad.cells,
               lad.steps, mult);
    add_ladder(rep, {"generator", "A C(f) = C(f'') + f'(0)", p, 2.0, 1.7, std::nullopt, 1e-11}, lad.cells, lad.steps,
               genr);
    add_ladder(rep, {"well_defined", "C(f) independent of n with supp f in [0, n tau]", p, 2.0, 1.7, std::nullopt, 1e-11},
               lad.cells, lad.steps, well);
    add_ladder(rep, {"smoothing_invariance", "C_{k*l}(f) = C_k(f)", p + " l=jalpha:1", 2.0, 1.7, std::nullopt, 1e-11},
               lad.cells, lad.steps, sm1);
    add_ladder(rep, {"smoothing_invariance", "C_{k*l}(f) = C_k(f)", p + " l=jalpha:0.25", 1.25, 0.95, std::nullopt, 1e-11},
               lad.cells, lad.steps, sm2);
    for (std::size_t r = 0; r < R; ++r) {
      rep.records.push_back(Record{"nondegeneracy", "for every mode some bump theta has C(theta) != 0", p, lad.cells[r],
                                   margin[r], 1e-8, margin[r] > 1e-8, std::nullopt});
    }
  }
  return rep;
}

Report run_kernel_suite(const RunConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.suite = "kernels";
  stamp(rep, cfg);
  const double L = 20.0;
  Ladder lad;
  for (auto m : cfg.ladder) {
    lad.cells.push_back(4 * m);
    lad.steps.push_back(L / static_cast<double>(4 * m));
  }
  for (double d : {0.3, 0.5, 0.7}) {
    std::vector<double> v;
    for (auto m : lad.cells) {
      const auto s = sample(Kernel::kdelta(d), Grid(L, m));
      double worst = 0.0;
      for (cplx lam : {cplx(1.0), cplx(2.0), cplx(1.0, 1.0)}) {
        const double tail = std::exp(-lam.real() * L);
        worst = std::max(worst, std::max(0.0, std::abs(laplace_transform(s, lam) - std::exp(-std::pow(lam, d))) - tail));
      }
      v.push_back(worst);
    }
    add_ladder(rep, {"kdelta_laplace", "|transform of K_delta samples - exp(-lambda^delta)| <= tail + C h^2",
                     "delta=" + fmt(d) + " T=20 lambda in {1,2,1+i}", 2.0, 1.7, std::nullopt, 1e-10},
               lad.cells, lad.steps, v);
  }
  {
    const auto k = Kernel::kdelta(0.5);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = 0.05 + (5.0 - 0.05) * i / 1000.0;
      const double ref = std::pow(t, -1.5) * std::exp(-1.0 / (4.0 * t)) / (2.0 * std::sqrt(M_PI));
      worst = std::max(worst, std::abs(k(t) - ref) / ref);
    }
    rep.records.push_back(Record{"kdelta_half_closed_form", "K_{1/2}(t) = t^{-3/2} exp(-1/(4t)) / (2 sqrt(pi))",
                                 "t in [0.05, 5]", std::nullopt, worst, 1e-10, worst <= 1e-10, std::nullopt});
  }
  {
    const Grid g(cfg.T, cfg.ladder.front());
    const auto sub = subordinate(Kernel::jalpha(1.0), g);
    const auto ref = sample(Kernel::jalpha(0.5), g);
    double worst = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) worst = std::max(worst, std::abs(sub[i] - ref[i]) / std::abs(ref[i]));
    rep.records.push_back(Record{"subordinated_chi", "subordinate(chi) = j_{1/2}", "relative, nodes t > 0",
                                 g.intervals(), worst, 1e-8, worst <= 1e-8, std::nullopt});
  }
  return rep;
}

}  // namespace ccf
