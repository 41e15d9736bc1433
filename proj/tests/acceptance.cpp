// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "ccf/harness.hpp"

using namespace ccf;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string summary(const Report& r) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& rec : r.records) {
    if (rec.order) lo = std::min(lo, *rec.order), hi = std::max(hi, *rec.order);
  }
  char buf[160];
  if (lo <= hi) {
    std::snprintf(buf, sizeof buf, "%zu/%zu records pass, fitted orders %.3f..%.3f", r.records.size() - r.failures(),
                  r.records.size(), lo, hi);
  } else {
    std::snprintf(buf, sizeof buf, "%zu/%zu records pass", r.records.size() - r.failures(), r.records.size());
  }
  return buf;
}

Outcome from(const Report& r) { return {r.all_pass(), summary(r)}; }

}  // namespace

int main() {
  RunConfig cfg;  // M in {256, 512, 1024}, T = 2
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"identity suite",
       [&] {
         const auto t0 = std::chrono::steady_clock::now();
         const auto r = run_identity_suite(cfg);
         const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
         auto o = from(r);
         o.pass = o.pass && s < 30.0;
         o.detail += ", " + std::to_string(s).substr(0, 5) + " s";
         return o;
       }},
      {"Duhamel residual", [&] { return from(run_duhamel_suite(cfg)); }},
      {"extension equivalence", [&] { return from(run_extension_demo(cfg)); }},
      {"functional calculus",
       [&] {
         RunConfig c = cfg;
         c.generator = "0,1,2i";
         return from(run_calculus_suite(c));
       }},
      {"kernel checks", [&] { return from(run_kernel_suite(cfg)); }},
      {"multiplication bound", [&] { return from(run_mult_exp(25.0, {0.25, 0.5, 1.0, 1.2})); }},
      {"l2 blow-up threshold", [&] { return from(run_l2_blowup(1.0, 30, {0.8, 1.2})); }},
      {"negative controls",
       [&] {
         RunConfig bad = cfg;
         bad.corrupt_convolution = true;
         const auto conv = run_identity_suite(bad);
         bool split_fails = false;
         for (const auto& rec : conv.records) split_fails = split_fails || (rec.name == "product_split_forward" && !rec.pass);
         RunConfig drop = cfg;
         drop.drop_term = 4;
         const auto ext = run_extension_demo(drop);
         Outcome o{split_fails && !ext.all_pass(),
                   "shifted convolution: " + std::to_string(conv.failures()) + " failing records; dropped term: " +
                       std::to_string(ext.failures()) + " failing records"};
         return o;
       }},
  };
  int failed = 0, n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    Outcome o{false, ""};
    try {
      o = run();
    } catch (const std::exception& e) {
      o.detail = std::string("error: ") + e.what();
    }
    std::printf("criterion %d %s: %s (%s)\n", n, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed ? 1 : 0;
}
