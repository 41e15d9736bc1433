#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "ccf/errors.hpp"
#include "ccf/extend.hpp"
#include "ccf/gridfn.hpp"
#include "oracles.hpp"

using namespace ccf;

namespace {

const DiagonalGenerator kGen({0.0, 1.0, cplx(0, 2), cplx(1, 1)});

PropagatorTable base_table(const Kernel& k, std::size_t J) {
  return convolve_family(base_cosine(kGen, Grid(1.0, J)), k);
}

// max over modes and nodes of |table - exact|
double table_error(const PropagatorTable& t, const std::function<cplx(cplx, double)>& exact) {
  double worst = 0.0;
  for (std::size_t m = 0; m < t.modes(); ++m) {
    for (std::size_t i = 0; i < t.grid().size(); ++i) {
      worst = std::max(worst, std::abs(t.column(m)[i] - exact(kGen[m], t.grid().node(i))));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("extension matches closed forms for j1") {
  auto tabs = extend_all(base_table(Kernel::jalpha(1.0), 128), Kernel::jalpha(1.0), 3, PowerMode::analytic);
  REQUIRE(tabs.size() == 4);
  for (int n = 0; n <= 3; ++n) {
    const auto& t = tabs[static_cast<std::size_t>(n)];
    CHECK(t.grid().length() == doctest::Approx(n + 1.0));
    const double err = table_error(t, [n](cplx a, double x) { return oracle::jbeta_cosh(n + 1.0, a, x); });
    INFO("n = " << n << " err = " << err);
    CHECK(err < 1e-3 * std::pow(10.0, n));
  }
  // a = 0, k = j1, one step: C(t) = t^2/2.
  CHECK(std::abs(tabs[1].column(0).at_time(2.0) - 2.0) < 1e-10);
  // a = 1: cosh t - 1.
  CHECK(std::abs(tabs[1].column(1).at_time(1.5) - (std::cosh(1.5) - 1.0)) < 1e-4);
  // n_max = 2: int_0^t (t-s)^2/2 cosh s ds = sinh t - t.
  const double t3 = 2.5;
  CHECK(std::abs(tabs[2].column(1).at_time(t3) - (std::sinh(t3) - t3)) < 1e-3);
}

TEST_CASE("extension converges at second order") {
  for (auto k : {Kernel::jalpha(1.0), Kernel::jalpha(0.5), Kernel::chi01()}) {
    double prev = 0.0;
    for (std::size_t J : {64, 128, 256}) {
      auto t = extend_full(base_table(k, J), k, 2, PowerMode::numeric);
      const double err = table_error(t, [&](cplx a, double x) {
        if (std::holds_alternative<CharInterval>(k.variant())) return oracle::chi_power_cosh(3, a, x);
        return oracle::jbeta_cosh(3.0 * std::get<Jalpha>(k.variant()).alpha, a, x);
      });
      INFO(k.spec() << " J = " << J << " err = " << err);
      CHECK(err < 5e-2);
      if (prev > 0.0) CHECK(std::log2(prev / err) > 1.7);
      prev = err;
    }
  }
}

TEST_CASE("analytic and numeric powers agree") {
  auto base = base_table(Kernel::jalpha(0.5), 128);
  auto a = extend_full(base, Kernel::jalpha(0.5), 3, PowerMode::analytic);
  auto b = extend_full(base, Kernel::jalpha(0.5), 3, PowerMode::numeric);
  auto f = fractional_extend(base, 0.5, 3);
  for (std::size_t m = 0; m < a.modes(); ++m) {
    CHECK(max_abs_diff(a.column(m), b.column(m)) < 1e-2);
    CHECK(max_abs_diff(a.column(m), f.column(m)) == 0.0);
  }
  const double err = table_error(a, [](cplx z, double x) { return oracle::jbeta_cosh(2.0, z, x); });
  CHECK(err < 1e-2);
}

TEST_CASE("seam is continuous") {
  auto base = base_table(Kernel::chi01(), 64);
  auto prev = extend_full(base, Kernel::chi01(), 1);
  const ExtensionInput in{base, prev, Kernel::chi01(), Kernel::char_interval_power(2), 1.0, 2};
  CHECK(seam_mismatch(in) < 1e-12);
}

TEST_CASE("dropping a term breaks the identity") {
  auto k = Kernel::jalpha(1.0);
  auto base = base_table(k, 64);
  const auto good = table_error(extend_full(base, k, 1, PowerMode::analytic),
                                [](cplx a, double x) { return oracle::jbeta_cosh(2.0, a, x); });
  CHECK(good < 1e-3);
  for (int drop = 2; drop <= 5; ++drop) {
    ExtendOptions opt;
    opt.drop_term = drop;
    const auto bad = table_error(extend_full(base, k, 1, PowerMode::analytic, opt),
                                 [](cplx a, double x) { return oracle::jbeta_cosh(2.0, a, x); });
    INFO("drop " << drop);
    CHECK(bad > 100.0 * good);
  }
}

TEST_CASE("iterated doubling agrees with one shot") {
  for (auto k : {Kernel::jalpha(1.0), Kernel::chi01()}) {
    auto base = base_table(k, 64);
    CHECK(iterated_vs_one_shot(base, k, 2, PowerMode::numeric) < 1e-2);
  }
  auto base = base_table(Kernel::jalpha(1.0), 64);
  CHECK(iterated_vs_one_shot(base, Kernel::jalpha(1.0), 2, PowerMode::analytic) < 1e-3);
}

TEST_CASE("extension input validation") {
  auto k = Kernel::jalpha(1.0);
  auto base = base_table(k, 64);
  CHECK_THROWS_AS(extend_step({base, base, k, k, 1.0, 2}), ShapeError);
  CHECK_THROWS_AS(extend_step({base, base, k, k, 1.0 / 3.0, 1}), UsageError);
  auto other = convolve_family(base_cosine(DiagonalGenerator({0.0, 1.0, 2.0, 3.0}), Grid(1.0, 64)), k);
  CHECK_THROWS_AS(extend_step({base, other, k, k, 1.0, 1}), ShapeError);
  auto coarse = base_table(k, 32);
  CHECK_THROWS_AS(extend_step({base, coarse, k, k, 1.0, 1}), ShapeError);
}

TEST_CASE("extended tables satisfy the Duhamel identity") {
  for (auto k : {Kernel::jalpha(0.5), Kernel::chi01()}) {
    double prev = 0.0;
    for (std::size_t J : {64, 128, 256}) {
      auto t = extend_full(base_table(k, J), k, 2, PowerMode::analytic);
      double worst = 0.0;
      for (std::size_t m = 0; m < t.modes(); ++m) {
        for (double x : {0.5, 1.0, 1.5, 2.25, 3.0}) worst = std::max(worst, duhamel_residual(t, m, x));
      }
      INFO(k.spec() << " J = " << J << " residual = " << worst);
      CHECK(worst < 1e-2);
      if (prev > 0.0) CHECK(std::log2(prev / worst) > 1.7);
      prev = worst;
    }
  }
}
