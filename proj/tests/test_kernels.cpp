#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ccf/errors.hpp"
#include "ccf/gridfn.hpp"
#include "ccf/kernels.hpp"
#include "oracles.hpp"

using namespace ccf;

TEST_CASE("parameter checks") {
  CHECK_THROWS_AS(Kernel::jalpha(0.0), DomainError);
  CHECK_THROWS_AS(Kernel::kdelta(1.0), DomainError);
  CHECK_THROWS_AS(Kernel::kdelta(0.0), DomainError);
  CHECK_THROWS_AS(parse_kernel("jalpha:-1"), UsageError);
  CHECK_THROWS_AS(parse_kernel("gauss"), UsageError);
}

TEST_CASE("spec strings") {
  CHECK(parse_kernel("jalpha:0.5").spec() == "jalpha:0.5");
  CHECK(parse_kernel("chi01").spec() == "chi01");
  CHECK(parse_kernel("kdelta:0.3").spec() == "kdelta:0.29999999999999999");
  CHECK(parse_kernel("subord:chi01").spec() == "subord:chi01");
}

TEST_CASE("sampling examples") {
  Grid g(2.0, 64);
  auto j1 = sample(Kernel::jalpha(1.0), g);
  for (std::size_t i = 0; i < j1.size(); ++i) CHECK(j1[i] == cplx(1.0));
  auto j2 = sample(Kernel::jalpha(2.0), g);
  for (std::size_t i = 0; i < j2.size(); ++i) CHECK(std::abs(j2[i] - g.node(i)) < 1e-14);
  auto jh = sample(Kernel::jalpha(0.5), g);
  CHECK(jh[0] == cplx{});
  CHECK(jh.origin_exponent() == -0.5);
  CHECK(Kernel::kdelta(0.5)(0.25) == doctest::Approx(8.0 * std::exp(-1.0) / (2.0 * std::sqrt(M_PI))).epsilon(1e-12));
}

TEST_CASE("chi01 jump convention and powers") {
  auto chi = Kernel::chi01();
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(1.0) == 0.5);
  CHECK(chi(1.5) == 0.0);
  auto c2 = Kernel::char_interval_power(2);
  CHECK(c2(0.5) == doctest::Approx(0.5));
  CHECK(c2(1.5) == doctest::Approx(0.5));
  auto c3 = Kernel::char_interval_power(3);
  CHECK(c3(1.5) == doctest::Approx(0.75));
  CHECK(detail::bspline(4, 2.0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("K_1/2 closed form on [0.05, 5]") {
  auto k = Kernel::kdelta(0.5);
  for (double t = 0.05; t <= 5.0; t *= 1.07) {
    const double ref = oracle::kdelta_half(t);
    CHECK(std::abs(k(t) - ref) <= 1e-10 * ref);
  }
}

TEST_CASE("K_delta positivity and branch agreement") {
  for (double d : {0.3, 0.5, 0.7}) {
    const double tc = detail::kdelta_crossover(d);
    const double s = detail::kdelta_series(d, tc, 40), c = detail::kdelta_contour(d, tc);
    CHECK(std::abs(s - c) <= 1e-10 * c);
    Grid g(5.0, 500);
    auto v = sample(Kernel::kdelta(d), g);
    for (std::size_t i = 1; i < v.size(); ++i) {
      // Tiny t underflows double; positivity is then read off the log-density.
      if (v[i].real() > 0.0) continue;
      CHECK(g.node(i) < tc);
      CHECK(std::isfinite(detail::kdelta_log_contour(d, g.node(i))));
    }
  }
}

TEST_CASE("closed-form transforms") {
  CHECK(std::abs(Kernel::kdelta(0.3).laplace(1.0) - std::exp(-1.0)) < 1e-15);
  CHECK(std::abs(kernel_laplace(Kernel::jalpha(2.0), 2.0) - 0.25) < 1e-15);
  CHECK(std::abs(Kernel::chi01().laplace(1e-9) - 1.0) < 1e-8);
  CHECK_THROWS_AS(Kernel::jalpha(0.5).laplace(cplx(-1.0, 0.0)), DomainError);
  CHECK_NOTHROW(Kernel::jalpha(2.0).laplace(cplx(-1.0, 0.0)));
}

TEST_CASE("numeric transforms of samples") {
  Grid g(20.0, 8000);
  for (double d : {0.3, 0.5, 0.7}) {
    auto k = Kernel::kdelta(d);
    auto s = sample(k, g);
    for (cplx lam : {cplx(1.0), cplx(2.0), cplx(1.0, 1.0)}) {
      const cplx num = laplace_transform(s, lam);
      // K_delta is a probability density, so the part beyond T is at most exp(-Re(lambda) T).
      const double tail = std::exp(-lam.real() * g.length());
      CHECK(std::abs(num - k.laplace(lam)) <= tail + 1e-6);
    }
  }
}

TEST_CASE("semigroup of fractional kernels") {
  Grid g(2.0, 512);
  for (auto [a, b] : {std::pair{0.5, 0.5}, {0.3, 0.7}, {1.0, 1.0}}) {
    auto c = convolve(sample(Kernel::jalpha(a), g), sample(Kernel::jalpha(b), g));
    auto ref = sample(Kernel::jalpha(a + b), g);
    CHECK(max_abs_diff(c, ref) < 1e-6);
  }
}

TEST_CASE("origin in the support") {
  Grid g(2.0, 256);
  for (auto k : {Kernel::jalpha(0.5), Kernel::jalpha(2.0), Kernel::chi01(), Kernel::kdelta(0.5)}) {
    auto s = sample(k, g);
    CHECK(std::abs(integrate(s.resized(2))) > 0.0);
  }
}

TEST_CASE("analytic powers") {
  CHECK(std::get<Jalpha>(Kernel::jalpha(0.5).analytic_power(4)->variant()).alpha == 4 * 0.5);
  auto k = Kernel::kdelta(0.5);
  auto k2 = *k.analytic_power(2);
  CHECK(std::abs(k2.laplace(1.7) - k.laplace(1.7) * k.laplace(1.7)) < 1e-14);
  Grid g(4.0, 1024);
  auto num = convolution_power(sample(Kernel::chi01(), g), 3);
  CHECK(max_abs_diff(num, sample(Kernel::char_interval_power(3), g)) < 1e-10);
}

TEST_CASE("subordination") {
  Grid g(2.0, 256);
  auto s = subordinate(Kernel::jalpha(1.0), g);
  auto j = sample(Kernel::jalpha(0.5), g);
  CHECK(s.origin_exponent() == doctest::Approx(-0.5));
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(std::abs(s[i] - j[i]) < 1e-10 * std::abs(j[i]));
  CHECK(subordinate(Kernel::sampled(GridFunction::zeros(g)), g).max_abs() == 0.0);
  auto sj = subordinate(Kernel::jalpha(1.5), g);
  CHECK(std::abs(sj.at_time(1.0) - oracle::jalpha(0.75, 1.0)) < 1e-10);
  Grid big(40.0, 8000);
  CHECK(std::abs(laplace_transform(subordinate(Kernel::jalpha(1.0), big), 1.0) - 1.0) < 1e-3);
  auto wide = Kernel::sampled(GridFunction::sample(Grid(3.0, 30), [](double) { return 1.0; }));
  CHECK_THROWS_AS(subordinate(wide, g), DomainError);
}
