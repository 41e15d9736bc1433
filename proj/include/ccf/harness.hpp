#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccf/grid.hpp"

namespace ccf {

/// One checked quantity. Order records carry the fitted exponent in `value`
/// and its lower bound in `tolerance`.
struct Record {
  std::string name;
  std::string anchor;  // the identity or bound being checked
  std::string params;
  std::optional<std::size_t> cells;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::optional<double> order;
};

struct Report {
  std::string suite;
  std::vector<std::pair<std::string, std::string>> environment;
  std::vector<Record> records;

  bool all_pass() const;
  std::size_t failures() const;
  void append(const Report& other);
};

enum class Format { csv, json };

/// {"schema": 1, "suite", "environment", "records", "pass"}.
void write_json(std::ostream& os, const Report& r);
/// suite,name,params,M,value,tolerance,order,pass,anchor
void write_csv(std::ostream& os, const Report& r);
/// Writes to `path` ("-" is stdout); IoError names the path.
void write_report(const std::string& path, Format format, const Report& r);

struct RunConfig {
  std::vector<std::size_t> ladder{256, 512, 1024};
  double T = 2.0;
  std::string generator = "0,1,2i,1+i";
  /// Kernel specs; empty means the suite's default list.
  std::vector<std::string> kernels;
  /// Negative controls.
  bool corrupt_convolution = false;
  int drop_term = 0;

  /// Throws UsageError unless the ladder has >= 2 strictly increasing rungs and T > 0.
  void validate() const;
};

/// Values of one check on a grid ladder with step h_r.
///
/// C = value_0 / h_0^p is taken from the coarsest rung and finer rungs must
/// satisfy value <= 1.5 C h^p unless below `floor`. The fitted slope of
/// log value against log h over the rungs above `floor` must lie in
/// [order_lo, order_hi]; fewer than two such rungs skip the order test.
struct LadderSpec {
  std::string name;
  std::string anchor;
  std::string params;
  double exponent = 2.0;
  double order_lo = 1.7;
  std::optional<double> order_hi;
  double floor = 1e-12;
};
void add_ladder(Report& r, const LadderSpec& spec, std::span<const std::size_t> cells, std::span<const double> steps,
                std::span<const double> values);
/// Least-squares slope of log v against log h.
double fitted_order(std::span<const double> steps, std::span<const double> values);

Report run_identity_suite(const RunConfig& cfg);
Report run_duhamel_suite(const RunConfig& cfg);
/// Extension over [0, (n + 1) T/2] for n <= 3 against closed forms.
Report run_extension_demo(const RunConfig& cfg);
Report run_calculus_suite(const RunConfig& cfg);
Report run_kernel_suite(const RunConfig& cfg);

/// log|sinh(a_m t)/a_m| for a_m = m/T + i sqrt((e^m/m)^2 - (m/T)^2), m = 1..modes.
std::vector<double> l2_log_entries(double T, int modes, double t);
Report run_l2_blowup(double T, int modes, const std::vector<double>& times);

/// log|sinh(z t)/z| with z = x + i e^x.
double mult_log_entry(double x, double t);
Report run_mult_exp(double x_max, const std::vector<double>& times);

}  // namespace ccf
