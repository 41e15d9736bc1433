#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace ccf {

using cplx = std::complex<double>;

class Kernel;

/// Uniform partition of [0, T] into M cells, nodes t_i = i*h.
class Grid {
 public:
  Grid(double length, std::size_t intervals);

  double length() const noexcept { return length_; }
  std::size_t intervals() const noexcept { return intervals_; }
  std::size_t size() const noexcept { return intervals_ + 1; }
  double step() const noexcept { return step_; }
  double node(std::size_t i) const noexcept { return static_cast<double>(i) * step_; }

  /// Index of t when t is a node (to within 1e-9 of a step).
  std::optional<std::size_t> index_of(double t) const;
  /// Grid with the same step and a different number of cells.
  Grid with_intervals(std::size_t intervals) const;
  bool same_step(const Grid& other) const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.intervals_ == b.intervals_ && a.same_step(b);
  }

 private:
  double length_;
  std::size_t intervals_;
  double step_;
};

/// Inclusive node range outside which samples are exactly zero.
struct Support {
  std::size_t lo;
  std::size_t hi;
};

/// Complex samples of a function on a Grid.
///
/// origin_exponent() records a known t^gamma behaviour at t = 0 (gamma = 0 for
/// regular data). Quadrature uses it to interpolate t^-gamma * f instead of f.
/// source() is set when the samples came from an analytic Kernel.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<cplx> values, std::optional<Support> support = std::nullopt);

  static GridFunction zeros(const Grid& grid);

  template <class F>
  static GridFunction sample(const Grid& grid, F&& f) {
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(f(grid.node(i)));
    return GridFunction(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const cplx> values() const noexcept { return values_; }
  cplx operator[](std::size_t i) const noexcept { return values_[i]; }
  cplx at_time(double t) const;  // t must be a node

  const std::optional<Support>& support() const noexcept { return support_; }
  double origin_exponent() const noexcept { return origin_exponent_; }
  const std::shared_ptr<const Kernel>& source() const noexcept { return source_; }

  GridFunction with_origin_exponent(double gamma) const;
  GridFunction with_source(std::shared_ptr<const Kernel> k) const;
  GridFunction with_support(Support s) const;
  /// Tightest support computed from the samples (nullopt when all zero).
  std::optional<Support> detect_support() const;

  /// Same step, `intervals` cells: truncates or pads with zeros.
  GridFunction resized(std::size_t intervals) const;
  /// Node-wise transform; drops source and support metadata.
  template <class F>
  GridFunction map(F&& f) const {
    std::vector<cplx> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(values_[i], grid_.node(i));
    return GridFunction(grid_, std::move(v));
  }

  double max_abs() const noexcept;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(cplx s);
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(GridFunction a, cplx s) { return a *= s; }
  friend GridFunction operator*(cplx s, GridFunction a) { return a *= s; }

 private:
  void require_same_grid(const GridFunction& o) const;
  void merge_metadata(const GridFunction& o);

  Grid grid_;
  std::vector<cplx> values_;
  std::optional<Support> support_;
  double origin_exponent_ = 0.0;
  std::shared_ptr<const Kernel> source_;
};

double max_abs_diff(const GridFunction& a, const GridFunction& b);

/// CSV with header `# T=<T> M=<M>` followed by `t,re,im` rows.
void write_csv(std::ostream& os, const GridFunction& f);
GridFunction read_csv(std::istream& is);

}  // namespace ccf
