#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ccf/errors.hpp"
#include "ccf/gridfn.hpp"
#include "ccf/weyl.hpp"

using namespace ccf;

namespace {

// Residuals on two grids: returns the observed order.
template <class F>
double observed_order(F&& residual, std::size_t m) {
  const double r1 = residual(m), r2 = residual(2 * m);
  return std::log2(r1 / r2);
}

}  // namespace

TEST_CASE("bump closed forms") {
  TestFunction f(0.2, 0.8, 4);
  Grid g(2.0, 2000);
  CHECK(std::abs(integrate(f.sample(g)) - 1.0) < 1e-6);
  // Finite differences of the closed form agree with the closed-form derivatives.
  for (int n = 0; n < 4; ++n) {
    for (double t : {0.3, 0.5, 0.71}) {
      const double e = 1e-5;
      const double fd = (f.derivative(n, t + e) - f.derivative(n, t - e)) / (2 * e);
      CHECK(fd == doctest::Approx(f.derivative(n + 1, t)).epsilon(1e-6));
    }
  }
  CHECK(f(0.2) == 0.0);
  CHECK(f.derivative(2, 0.8) == 0.0);
  auto s = f.sample(g);
  REQUIRE(s.support());
  CHECK(g.node(s.support()->lo) > 0.2);
  CHECK(g.node(s.support()->hi) < 0.8);
  CHECK_THROWS_AS(TestFunction(0.5, 0.2), DomainError);
  CHECK_THROWS_AS(TestFunction(0.0, 1.0, 3), DomainError);
  CHECK(TestFunction::parse("bump:0.1,0.9,6").degree() == 6);
  CHECK_THROWS_AS(TestFunction::parse("0.1;0.9"), UsageError);
}

TEST_CASE("t_prime examples") {
  Grid g(2.0, 400);
  TestFunction f(0.2, 0.9, 6);
  auto fs = f.sample(g);
  auto tp = t_prime(Kernel::jalpha(1.0), fs);
  CHECK(std::abs(tp[0] - integrate(fs)) < 1e-12);
  auto tc = t_prime(Kernel::chi01(), fs);
  // int_t^{t+1} f at t = 0.5 covers [0.5, 0.9]: the remaining mass.
  const double tail = std::abs(integrate(fs) - antiderivative(fs).at_time(0.5));
  CHECK(std::abs(tc.at_time(0.5) - tail) < 1e-8);
  CHECK(t_prime(Kernel::jalpha(0.5), GridFunction::zeros(g)).max_abs() == 0.0);
}

TEST_CASE("weyl examples") {
  Grid g(2.0, 400);
  TestFunction f(0.2, 0.9, 6);
  auto w1 = weyl_apply(WeylOperator(Kernel::jalpha(1.0)), f, g);
  CHECK(max_abs_diff(w1, f.sample(g, 1) * cplx(-1.0)) == 0.0);
  TestFunction small(0.1, 0.7, 6);
  auto wc = weyl_apply(WeylOperator(Kernel::chi01()), small, g);
  CHECK(max_abs_diff(wc, small.sample(g, 1) * cplx(-1.0)) == 0.0);
  CHECK_THROWS_AS(WeylOperator(Kernel::kdelta(0.5)), UnsupportedKernel);
  CHECK_THROWS_AS(WeylOperator(Kernel::char_interval_power(2)), UnsupportedKernel);
}

TEST_CASE("W_{j_alpha} fixes the exponential") {
  Grid g(30.0, 6000);
  auto e = GridFunction::sample(g, [](double t) { return std::exp(-t); });
  for (double alpha : {0.5, 1.0, 1.5}) {
    auto w = weyl_apply(WeylOperator(Kernel::jalpha(alpha)), e);
    for (double t : {0.5, 1.0, 3.0}) CHECK(std::abs(w.at_time(t) - std::exp(-t)) < 1e-3 * std::exp(-t));
  }
}

TEST_CASE("roundtrip residuals are second order") {
  TestFunction f(0.2, 0.9, 8);
  for (double alpha : {1.0, 0.5, 1.5, 2.0}) {
    auto res = [&](std::size_t m) { return roundtrip_check(Kernel::jalpha(alpha), f, Grid(2.0, m)); };
    CHECK(res(256) < 1e-2 * f.sample(Grid(2.0, 256)).max_abs());
    CHECK(observed_order(res, 256) > 1.7);
  }
  auto resc = [&](std::size_t m) { return roundtrip_check(Kernel::chi01(), TestFunction(0.3, 1.6, 8), Grid(2.0, m)); };
  CHECK(resc(256) < 1e-3);
  CHECK(observed_order(resc, 256) > 1.7);
  CHECK(roundtrip_check(Kernel::jalpha(0.5), GridFunction::zeros(Grid(2.0, 64))) == 0.0);
}

TEST_CASE("roundtrip on samples") {
  TestFunction f(0.2, 0.9, 8);
  Grid g(2.0, 1024);
  CHECK(roundtrip_check(Kernel::jalpha(1.0), f.sample(g)) < 1e-3);
  CHECK(roundtrip_check(Kernel::jalpha(0.5), f.sample(g)) < 1e-3);
  CHECK(roundtrip_check(Kernel::chi01(), f.sample(g)) < 1e-3);
}

TEST_CASE("W of a power through the co-integral") {
  // W_{j_{m a}} f = j_{(n-m) a} o W_{j_{n a}} f
  TestFunction f(0.3, 1.2, 10);
  for (double alpha : {0.5, 1.0}) {
    for (int n = 1; n <= 3; ++n) {
      for (int m = 1; m <= n; ++m) {
        auto res = [&](std::size_t M) {
          Grid g(2.0, M);
          auto lhs = weyl_apply(WeylOperator(Kernel::jalpha(m * alpha)), f, g);
          auto wn = weyl_apply(WeylOperator(Kernel::jalpha(n * alpha)), f, g);
          auto rhs = m == n ? wn : t_prime(Kernel::jalpha((n - m) * alpha), wn);
          return max_abs_diff(lhs, rhs) / lhs.max_abs();
        };
        const double r = res(256);
        CHECK(r < 1e-2);
        if (r > 1e-11) CHECK(observed_order(res, 256) > 1.7);
      }
    }
  }
}

TEST_CASE("support does not grow") {
  Grid g(2.0, 400);
  TestFunction f(0.2, 0.9, 6);
  const auto fs = f.sample(g).support().value();
  for (auto k : {Kernel::jalpha(0.5), Kernel::jalpha(2.0), Kernel::chi01()}) {
    auto w = weyl_apply(WeylOperator(k), f, g);
    auto s = w.detect_support();
    REQUIRE(s);
    CHECK(s->hi <= fs.hi + 1);
  }
}

TEST_CASE("T' commutes with the dual product") {
  TestFunction f(0.1, 0.6, 8), h(0.4, 1.3, 8);
  for (auto k : {Kernel::jalpha(1.0), Kernel::jalpha(0.5), Kernel::chi01()}) {
    auto res = [&](std::size_t M) {
      Grid g(2.0, M);
      auto fs = f.sample(g), hs = h.sample(g);
      return max_abs_diff(t_prime(k, dual_convolve(fs, hs)), dual_convolve(fs, t_prime(k, hs)));
    };
    CHECK(res(256) < 1e-3);
    if (res(256) > 1e-11) CHECK(observed_order(res, 256) > 1.7);
  }
}
