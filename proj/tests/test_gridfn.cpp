#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ccf/errors.hpp"
#include "ccf/gridfn.hpp"
#include "oracles.hpp"

using namespace ccf;

namespace {

GridFunction ones(const Grid& g) {
  return GridFunction::sample(g, [](double) { return 1.0; });
}

GridFunction bump(const Grid& g, double a, double b) {
  auto f = GridFunction::sample(g, [a, b](double t) {
    return (t > a && t < b) ? std::pow((t - a) * (b - t), 4) * 1e3 : 0.0;
  });
  return f.with_support(*f.detect_support());
}

}  // namespace

TEST_CASE("grid invariants") {
  Grid g(2.0, 8);
  CHECK(g.step() * 8 == doctest::Approx(2.0));
  CHECK(g.size() == 9);
  CHECK(g.index_of(0.75).value() == 3);
  CHECK_FALSE(g.index_of(0.7).has_value());
  CHECK_THROWS_AS(Grid(2.0, 1), DomainError);
  CHECK_THROWS_AS(GridFunction(g, std::vector<cplx>(5)), ShapeError);
  std::vector<cplx> v(9);
  v[1] = 1.0;
  CHECK_THROWS_AS(GridFunction(g, v, Support{2, 4}), ShapeError);
}

TEST_CASE("csv round trip") {
  Grid g(1.5, 6);
  auto f = GridFunction::sample(g, [](double t) { return std::sin(t); });
  std::stringstream ss;
  write_csv(ss, f);
  CHECK(ss.str().rfind("# T=1.5 M=6\nt,re,im\n", 0) == 0);
  auto r = read_csv(ss);
  CHECK(r.grid() == g);
  CHECK(max_abs_diff(f, r) < 1e-15);
}

TEST_CASE("convolve examples") {
  Grid g(2.0, 256);
  auto chi = ones(g);
  CHECK(std::abs(convolve(chi, chi).at_time(1.5) - 1.5) < 1e-12);
  CHECK(convolve(bump(g, 0.2, 0.9), GridFunction::zeros(g)).max_abs() == 0.0);

  Grid g1(2.0, 1024);
  auto j = sample(Kernel::jalpha(0.5), g1);
  CHECK(std::abs(convolve(j, j).at_time(1.0) - 1.0) < 1e-6);
}

TEST_CASE("convolve errors") {
  Grid a(2.0, 16), b(2.0, 32);
  CHECK_THROWS_AS(convolve(ones(a), ones(b)), ShapeError);
  CHECK_THROWS_AS(convolve(ones(a), ones(a), QuadratureRule::product), UsageError);
  CHECK_THROWS_AS(convolution_power(ones(a), 0), UsageError);
  CHECK_THROWS_AS(derivative(ones(a), 3), UsageError);
}

TEST_CASE("convolve support starts at the sum of starts") {
  Grid g(2.0, 200);
  auto f = bump(g, 0.3, 0.6), h = bump(g, 0.5, 0.8);
  auto c = convolve(f, h);
  REQUIRE(c.support().has_value());
  CHECK(c.support()->lo >= f.support()->lo + h.support()->lo);
}

TEST_CASE("commutativity and backends") {
  Grid g(2.0, 512);
  auto f = GridFunction::sample(g, [](double t) { return cplx(std::cos(3 * t), t * t); });
  auto h = GridFunction::sample(g, [](double t) { return std::exp(-t) * std::sin(5 * t); });
  const double scale = f.max_abs() * h.max_abs() * g.length();
  CHECK(max_abs_diff(convolve(f, h), convolve(h, f)) <= 1e-10 * scale);
  const auto direct = convolve(f, h, QuadratureRule::trapezoid, Backend::serial);
  const auto fft = convolve(f, h, QuadratureRule::trapezoid, Backend::fft);
  const auto omp = convolve(f, h, QuadratureRule::trapezoid, Backend::parallel);
  CHECK(max_abs_diff(direct, fft) <= 1e-12 * scale);
  CHECK(max_abs_diff(direct, omp) == 0.0);
}

TEST_CASE("dual convolve examples") {
  Grid g(40.0, 8192);
  auto e = GridFunction::sample(g, [](double t) { return std::exp(-t); });
  CHECK(std::abs(dual_convolve(e, e).at_time(0.0) - 0.5) < 1e-5);

  Grid g2(2.0, 512);
  auto chi = sample(Kernel::chi01(), g2);
  auto d = dual_convolve(chi, chi);
  CHECK(std::abs(d.at_time(0.25) - 0.75) < 1e-12);
  CHECK(std::abs(d.at_time(1.5)) == 0.0);

  auto b = bump(g2, 0.2, 0.9);
  auto db = dual_convolve(ones(g2), b);
  CHECK(db.at_time(1.25) == cplx{});
}

TEST_CASE("cosine convolve examples") {
  Grid g(2.0, 512);
  auto chi = sample(Kernel::chi01(), g);
  CHECK(std::abs(cosine_convolve(chi, chi).at_time(1.0) - 0.5) < 1e-12);
  auto f = bump(g, 0.2, 0.9);
  CHECK(std::abs(cosine_convolve(f, f).at_time(0.0) - pairing(f, f)) < 1e-12);
  CHECK(cosine_convolve(GridFunction::zeros(g), f).max_abs() == 0.0);
}

TEST_CASE("convolution powers") {
  Grid g(2.0, 1024);
  auto j = sample(Kernel::jalpha(0.5), g);
  CHECK(max_abs_diff(convolution_power(j, 1), j) == 0.0);
  CHECK(std::abs(convolution_power(j, 4).at_time(1.0) - 1.0) < 1e-6);
  auto chi = ones(g);
  auto p = convolution_power(chi, 2);
  CHECK(std::abs(p.at_time(1.25) - 1.25) < 1e-12);
}

TEST_CASE("antiderivatives") {
  Grid g(2.0, 128);
  auto chi = ones(g);
  CHECK(std::abs(antiderivative(chi).at_time(1.0) - 1.0) < 1e-12);
  CHECK(std::abs(second_antiderivative(chi).at_time(2.0) - 2.0) < 1e-12);
  CHECK(antiderivative(GridFunction::zeros(g)).max_abs() == 0.0);
  auto f = GridFunction::sample(g, [](double t) { return std::cos(2 * t); });
  CHECK(max_abs_diff(second_antiderivative(f), antiderivative(antiderivative(f))) < 1e-3);
  CHECK(max_abs_diff(second_antiderivative(f), convolve(f, GridFunction::sample(g, [](double t) { return t; }),
                                                         QuadratureRule::trapezoid)) < 1e-3);
}

TEST_CASE("derivatives") {
  Grid g(2.0, 64);
  auto sq = GridFunction::sample(g, [](double t) { return t * t; });
  CHECK(std::abs(derivative(sq, 1).at_time(1.0) - 2.0) < 1e-12);
  CHECK(derivative(ones(g), 1).max_abs() < 1e-12);
  auto d2 = derivative(sq, 2);
  for (std::size_t i = 0; i < d2.size(); ++i) CHECK(std::abs(d2[i] - 2.0) < 1e-9);
}

TEST_CASE("laplace transform") {
  Grid g(2.0, 256);
  auto f = GridFunction::sample(g, [](double t) { return std::sin(t); });
  CHECK(std::abs(laplace_transform(f, 0.0) - integrate(f)) < 1e-15);
  Grid big(40.0, 4096);
  CHECK(std::abs(laplace_transform(ones(big), 1.0) - (1.0 - std::exp(-40.0))) < 1e-3);
  CHECK_THROWS_AS(laplace_transform(f, cplx(NAN, 0)), DomainError);

  Grid g2(4.0, 1024);
  auto a = bump(g2, 0.1, 1.2), b = bump(g2, 0.3, 1.5);
  for (cplx lam : {cplx(1.0), cplx(2.0), cplx(1.0, 1.0)}) {
    const cplx lhs = laplace_transform(convolve(a, b), lam);
    const cplx rhs = laplace_transform(a, lam) * laplace_transform(b, lam);
    CHECK(std::abs(lhs - rhs) < 1e-5 * std::abs(rhs));
  }
}

TEST_CASE("laplace of singular kernel samples") {
  Grid g(40.0, 8192);
  auto j = sample(Kernel::jalpha(0.5), g);
  // int_0^40 t^-1/2 e^-t / sqrt(pi) = erf(sqrt(40)).
  CHECK(std::abs(laplace_transform(j, 1.0) - std::erf(std::sqrt(40.0))) < 1e-5);
}
