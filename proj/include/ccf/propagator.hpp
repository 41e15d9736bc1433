#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "ccf/grid.hpp"
#include "ccf/kernels.hpp"

namespace ccf {

/// A = diag(a_m^2) on a truncated sequence space; the base cosine family is
/// cosh(a_m t) entrywise.
class DiagonalGenerator {
 public:
  explicit DiagonalGenerator(std::vector<cplx> spectrum);

  /// Comma list of complex numbers ("0,1,2i,1+i") or "l2:<T>:<N>".
  static DiagonalGenerator parse(std::string_view spec);
  /// a_m = m/T + i sqrt((e^m/m)^2 - (m/T)^2), m = 1..modes.
  static DiagonalGenerator l2_blowup(double T, int modes);

  const std::vector<cplx>& spectrum() const noexcept { return a_; }
  std::size_t size() const noexcept { return a_.size(); }
  cplx operator[](std::size_t m) const { return a_.at(m); }
  friend bool operator==(const DiagonalGenerator&, const DiagonalGenerator&) = default;

 private:
  std::vector<cplx> a_;
};

/// "1", "-2.5", "2i", "1+i", "-0.5-3i", "i".
cplx parse_complex(std::string_view s);

/// E[i][m] = (k * cosh(a_m .))(t_i), one GridFunction per mode.
///
/// kernel == nullopt is the base cosine family itself (k = delta). In log scale
/// the columns hold log(entry): real part log|entry|, imaginary part the phase.
class PropagatorTable {
 public:
  PropagatorTable(DiagonalGenerator gen, std::optional<Kernel> kernel, Grid grid, std::vector<GridFunction> columns,
                  bool log_scale = false);

  const DiagonalGenerator& generator() const noexcept { return gen_; }
  const std::optional<Kernel>& kernel() const noexcept { return kernel_; }
  const Grid& grid() const noexcept { return grid_; }
  bool log_scale() const noexcept { return log_scale_; }
  std::size_t modes() const noexcept { return columns_.size(); }

  const GridFunction& column(std::size_t m) const { return columns_.at(m); }
  /// Linear-scale entry; throws UsageError on log-scale tables.
  cplx entry(std::size_t i, std::size_t m) const;
  /// log(entry) in either scale.
  cplx log_entry(std::size_t i, std::size_t m) const;

  /// Same table on the first `intervals` cells.
  PropagatorTable truncated(std::size_t intervals) const;

 private:
  DiagonalGenerator gen_;
  std::optional<Kernel> kernel_;
  Grid grid_;
  std::vector<GridFunction> columns_;
  bool log_scale_;
};

/// |a| T above which tables are stored in log scale.
inline constexpr double kLogScaleThreshold = 500.0;

/// cosh(a_m t_i); switches to log scale when some |a_m| T > 500.
PropagatorTable base_cosine(const DiagonalGenerator& gen, const Grid& grid);

/// Entrywise k * E. The kernel of the result is k combined with the table's.
PropagatorTable convolve_family(const PropagatorTable& table, const Kernel& k);

/// (chi * k) on the grid; chi for the base family.
GridFunction chi_conv_kernel(const std::optional<Kernel>& k, const Grid& grid);

/// |a_m^2 (I * E_m)(t) - E_m(t) + (chi * k)(t)| at every node.
GridFunction duhamel_residuals(const PropagatorTable& table, std::size_t m);
double duhamel_residual(const PropagatorTable& table, std::size_t m, double t);

/// max_m |E[i][m]| (may be inf for log-scale tables); and its logarithm.
double family_norm(const PropagatorTable& table, double t);
double family_log_norm(const PropagatorTable& table, double t);

/// Columns t,m,re,im (or t,m,logmag,phase in log scale) after a `#` header.
void write_csv(std::ostream& os, const PropagatorTable& table);

}  // namespace ccf
