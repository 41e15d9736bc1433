#include <cmath>
#include <limits>
#include <sstream>

#include "ccf/closed_forms.hpp"
#include "ccf/errors.hpp"
#include "ccf/harness.hpp"
#include "ccf/propagator.hpp"

namespace ccf {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

std::vector<double> l2_log_entries(double T, int modes, double t) {
  if (!(t > 0.0)) throw DomainError("blow-up scenario needs t > 0");
  if (modes > 40) throw UsageError("blow-up scenario supports at most 40 modes");
  const auto gen = DiagonalGenerator::l2_blowup(T, modes);
  std::vector<double> out;
  for (auto a : gen.spectrum()) out.push_back((closed::log_sinh(a * t) - std::log(a)).real());
  return out;
}

Report run_l2_blowup(double T, int modes, const std::vector<double>& times) {
  Report rep;
  rep.suite = "l2-blowup";
  rep.environment = {{"T", num(T)}, {"modes", std::to_string(modes)}};
  const int m0 = 10;
  for (double t : times) {
    const auto e = l2_log_entries(T, modes, t);
    const std::string p = "t=" + num(t);
    double dev = 0.0;
    for (int m = 1; m <= modes; ++m) {
      const double v = e[static_cast<std::size_t>(m - 1)];
      rep.records.push_back(Record{"log_entry", "log|sinh(a_m t)/a_m|", p + " m=" + std::to_string(m), std::nullopt, v,
                                   std::numeric_limits<double>::infinity(), std::isfinite(v), std::nullopt});
      if (m >= m0) dev = std::max(dev, std::abs(v - (std::log(m / 2.0) + m * (t / T - 1.0))));
    }
    if (modes > m0) {
      // Below T the entries eventually decay in m; from T on they grow.
      const bool decay = t < T;
      int bad = 0;
      for (int m = m0; m < modes; ++m) {
        const double d = e[static_cast<std::size_t>(m)] - e[static_cast<std::size_t>(m - 1)];
        bad += decay ? (d >= 0.0) : (d <= 0.0);
      }
      rep.records.push_back(Record{decay ? "eventually_decreasing" : "eventually_increasing",
                                   "log|C(t) e_m| ~ log(m/2) + m (t/T - 1)", p + " m>=10", std::nullopt,
                                   static_cast<double>(bad), 0.0, bad == 0, std::nullopt});
      rep.records.push_back(Record{"asymptotic_rate", "log|C(t) e_m| ~ log(m/2) + m (t/T - 1)", p + " m>=10",
                                   std::nullopt, dev, 1e-6, dev <= 1e-6, std::nullopt});
    }
  }
  return rep;
}

double mult_log_entry(double x, double t) {
  const cplx z(x, std::exp(x));
  const double log_abs_z = x + 0.5 * std::log1p(x * x * std::exp(-2.0 * x));
  return closed::log_sinh(z * t).real() - log_abs_z;
}

Report run_mult_exp(double x_max, const std::vector<double>& times) {
  if (!(x_max > 0.0) || x_max > 30.0) throw UsageError("x_max must be in (0, 30]");
  Report rep;
  rep.suite = "mult-exp";
  rep.environment = {{"x_max", num(x_max)}};
  const int n = static_cast<int>(std::ceil(x_max / 0.01));
  for (double t : times) {
    if (t < 0.0) throw DomainError("mult-exp scenario needs t >= 0");
    const std::string p = "t=" + num(t) + " x in [0," + num(x_max) + "]";
    double sup = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) sup = std::max(sup, mult_log_entry(x_max * i / n, t));
    if (t <= 1.0) {
      const double bound = std::log1p(1e-9);
      rep.records.push_back(Record{"sup_log_norm", "sup_x |sinh((x+ie^x)t)/(x+ie^x)| <= 1 for t <= 1", p, std::nullopt,
                                   sup, bound, sup <= bound, std::nullopt});
    } else {
      const double lo = mult_log_entry(0.4 * x_max, t), hi = mult_log_entry(x_max, t);
      rep.records.push_back(Record{"sup_log_norm", "sup_x log|sinh((x+ie^x)t)/(x+ie^x)|", p, std::nullopt, sup,
                                   std::numeric_limits<double>::infinity(), true, std::nullopt});
      rep.records.push_back(Record{"growth", "log|entry| at x_max exceeds its value at 0.4 x_max for t > 1",
                                   p, std::nullopt, hi - lo, 0.0, hi > lo, std::nullopt});
    }
  }
  return rep;
}

}  // namespace ccf
