#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "ccf/closed_forms.hpp"
#include "ccf/errors.hpp"
#include "ccf/harness.hpp"

using namespace ccf;

TEST_CASE("ladder calibration") {
  const std::vector<std::size_t> cells{64, 128, 256};
  const std::vector<double> h{1.0 / 64, 1.0 / 128, 1.0 / 256};
  Report r;
  add_ladder(r, {"quad", "x", "", 2.0, 1.7, 2.3, 1e-12}, cells, h, std::vector<double>{4e-4, 1e-4, 2.5e-5});
  REQUIRE(r.records.size() == 4);
  CHECK(r.all_pass());
  CHECK(r.records.back().order.value() == doctest::Approx(2.0));

  Report lin;
  add_ladder(lin, {"lin", "x", "", 2.0, 1.7, 2.3, 1e-12}, cells, h, std::vector<double>{4e-4, 2e-4, 1e-4});
  CHECK(lin.failures() == 3);  // two rungs above 1.5 C h^2 and the order

  Report fast;
  add_ladder(fast, {"fast", "x", "", 2.0, 1.7, 2.3, 1e-12}, cells, h, std::vector<double>{4e-4, 2.5e-5, 1.6e-6});
  CHECK_FALSE(fast.records.back().pass);  // order 4 is outside the window

  Report noise;
  add_ladder(noise, {"noise", "x", "", 2.0, 1.7, 2.3, 1e-12}, cells, h, std::vector<double>{1e-15, 3e-15, 2e-15});
  CHECK(noise.all_pass());
  CHECK(std::isnan(noise.records.back().value));

  CHECK(fitted_order(h, std::vector<double>{1.0 / 64, 1.0 / 128, 1.0 / 256}) == doctest::Approx(1.0));
}

TEST_CASE("run config validation") {
  RunConfig c;
  c.ladder = {};
  CHECK_THROWS_AS(c.validate(), UsageError);
  c.ladder = {256};
  CHECK_THROWS_AS(c.validate(), UsageError);
  c.ladder = {512, 256};
  CHECK_THROWS_AS(c.validate(), UsageError);
  c.ladder = {256, 512};
  CHECK_NOTHROW(c.validate());
  c.T = 0.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  CHECK_THROWS_AS(run_identity_suite(c), UsageError);
}

TEST_CASE("report serialization") {
  Report r;
  r.suite = "demo";
  r.environment = {{"T", "2"}};
  r.records.push_back(Record{"a", "f = g, h", "k=chi01", 64, 1e-3, 2e-3, true, 2.0});
  r.records.push_back(Record{"b", "x", "", std::nullopt, NAN, 1.7, true, std::nullopt});
  std::ostringstream js;
  write_json(js, r);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["schema"] == 1);
  CHECK(j["pass"] == true);
  CHECK(j["records"][0]["anchor"] == "f = g, h");
  CHECK(j["records"][1]["value"] == "nan");
  CHECK(j["records"][1]["M"].is_null());
  std::ostringstream cs;
  write_csv(cs, r);
  CHECK(cs.str().find("\"f = g, h\"") != std::string::npos);
  CHECK_THROWS_AS(write_report("/nonexistent/dir/report.json", Format::json, r), IoError);
}

TEST_CASE("l2 blow-up closed forms") {
  const auto e = l2_log_entries(1.0, 30, 0.8);
  CHECK(e[29] == doctest::Approx(std::log(15.0) - 6.0).epsilon(1e-9));
  const auto at_t = l2_log_entries(1.0, 30, 1.0);
  CHECK(at_t[29] == doctest::Approx(std::log(15.0)).epsilon(1e-9));
  // m = 1: a = 1 + i sqrt(e^2 - 1), direct evaluation.
  const cplx a1(1.0, std::sqrt(std::exp(2.0) - 1.0));
  CHECK(e[0] == doctest::Approx(std::log(std::abs(std::sinh(a1 * 0.8) / a1))));
  CHECK(run_l2_blowup(1.0, 30, {0.8, 1.0, 1.2}).all_pass());
  CHECK_THROWS_AS(l2_log_entries(1.0, 30, 0.0), DomainError);
  CHECK_THROWS_AS(l2_log_entries(1.0, 41, 0.5), UsageError);
}

TEST_CASE("multiplication scenario") {
  for (double x : {0.0, 1.0, 5.0, 25.0}) {
    const cplx z(x, std::exp(x));
    if (x < 20.0) CHECK(mult_log_entry(x, 0.7) == doctest::Approx(std::log(std::abs(std::sinh(z * 0.7) / z))));
    CHECK(mult_log_entry(x, 1.0) <= 1e-9);
  }
  CHECK(std::isinf(mult_log_entry(3.0, 0.0)));
  CHECK(mult_log_entry(25.0, 1.2) > mult_log_entry(10.0, 1.2));
  CHECK(mult_log_entry(20.0, 1.2) == doctest::Approx(0.2 * 20.0 - std::log(2.0)).epsilon(1e-6));
  CHECK(run_mult_exp(25.0, {0.0, 0.25, 0.5, 1.0, 1.2}).all_pass());
  CHECK_THROWS_AS(run_mult_exp(31.0, {1.0}), UsageError);
}

TEST_CASE("closed forms") {
  CHECK(std::abs(closed::jbeta_cosh(2.0, 1.0, 1.5) - (std::cosh(1.5) - 1.0)) < 1e-14);
  CHECK(std::abs(closed::jbeta_cosh(3.0, 1.0, 2.5) - (std::sinh(2.5) - 2.5)) < 1e-13);
  CHECK(std::abs(closed::bspline_cosh(1, 0.0, 1.5) - 1.0) < 1e-14);
  CHECK(std::abs(closed::log_sinh(cplx(-0.3, 0.2)) - std::log(std::sinh(cplx(-0.3, 0.2)))) < 1e-14);
}

TEST_CASE("negative controls fail the identity suite") {
  RunConfig c;
  c.ladder = {64, 128, 256};
  CHECK(run_identity_suite(c).all_pass());
  c.corrupt_convolution = true;
  const auto bad = run_identity_suite(c);
  bool split = false;
  for (const auto& rec : bad.records) split = split || (rec.name == "product_split_forward" && !rec.pass);
  CHECK(split);
}
