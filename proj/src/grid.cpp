#include "ccf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ccf/errors.hpp"

namespace ccf {

Grid::Grid(double length, std::size_t intervals)
    : length_(length), intervals_(intervals), step_(length / static_cast<double>(intervals)) {
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("grid length must be positive and finite");
  if (intervals < 2) throw DomainError("grid needs at least 2 intervals");
}

std::optional<std::size_t> Grid::index_of(double t) const {
  const double x = t / step_;
  const double r = std::round(x);
  if (r < 0.0 || r > static_cast<double>(intervals_) || std::abs(x - r) > 1e-9) return std::nullopt;
  return static_cast<std::size_t>(r);
}

Grid Grid::with_intervals(std::size_t intervals) const {
  Grid g(step_ * static_cast<double>(intervals), intervals);
  g.step_ = step_;
  return g;
}

bool Grid::same_step(const Grid& other) const noexcept {
  return std::abs(step_ - other.step_) <= 1e-12 * std::max(step_, other.step_);
}

GridFunction::GridFunction(Grid grid, std::vector<cplx> values, std::optional<Support> support)
    : grid_(grid), values_(std::move(values)), support_(support) {
  if (values_.size() != grid_.size()) throw ShapeError("sample count must equal M+1");
  if (support_) {
    if (support_->lo > support_->hi || support_->hi >= values_.size()) throw ShapeError("support hint out of range");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if ((i < support_->lo || i > support_->hi) && values_[i] != cplx{}) {
        throw ShapeError("nonzero sample outside support hint");
      }
    }
  }
}

GridFunction GridFunction::zeros(const Grid& grid) {
  return GridFunction(grid, std::vector<cplx>(grid.size()));
}

cplx GridFunction::at_time(double t) const {
  const auto i = grid_.index_of(t);
  if (!i) throw UsageError("time is not a grid node");
  return values_[*i];
}

GridFunction GridFunction::with_origin_exponent(double gamma) const {
  GridFunction r = *this;
  r.origin_exponent_ = gamma;
  return r;
}

GridFunction GridFunction::with_source(std::shared_ptr<const Kernel> k) const {
  GridFunction r = *this;
  r.source_ = std::move(k);
  return r;
}

GridFunction GridFunction::with_support(Support s) const {
  GridFunction r(grid_, values_, s);
  r.origin_exponent_ = origin_exponent_;
  r.source_ = source_;
  return r;
}

std::optional<Support> GridFunction::detect_support() const {
  auto nz = [](cplx z) { return z != cplx{}; };
  auto first = std::find_if(values_.begin(), values_.end(), nz);
  if (first == values_.end()) return std::nullopt;
  auto last = std::find_if(values_.rbegin(), values_.rend(), nz);
  return Support{static_cast<std::size_t>(first - values_.begin()),
                 static_cast<std::size_t>(values_.rend() - last - 1)};
}

GridFunction GridFunction::resized(std::size_t intervals) const {
  std::vector<cplx> v(intervals + 1);
  std::copy_n(values_.begin(), std::min(v.size(), values_.size()), v.begin());
  GridFunction r(grid_.with_intervals(intervals), std::move(v));
  r.origin_exponent_ = origin_exponent_;
  r.source_ = source_;
  if (support_ && support_->lo <= intervals) r.support_ = Support{support_->lo, std::min(support_->hi, intervals)};
  return r;
}

double GridFunction::max_abs() const noexcept {
  double m = 0.0;
  for (auto z : values_) m = std::max(m, std::abs(z));
  return m;
}

void GridFunction::require_same_grid(const GridFunction& o) const {
  if (!(grid_ == o.grid_)) throw ShapeError("grid mismatch");
}

void GridFunction::merge_metadata(const GridFunction& o) {
  if (support_ && o.support_) {
    support_ = Support{std::min(support_->lo, o.support_->lo), std::max(support_->hi, o.support_->hi)};
  } else {
    support_.reset();
  }
  // A sum of two different t^gamma behaviours has no single exponent.
  if (origin_exponent_ != o.origin_exponent_) origin_exponent_ = 0.0;
  source_.reset();
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  merge_metadata(o);
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  merge_metadata(o);
  return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
  for (auto& z : values_) z *= s;
  source_.reset();
  return *this;
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid() == b.grid())) throw ShapeError("grid mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void write_csv(std::ostream& os, const GridFunction& f) {
  const auto& g = f.grid();
  os << "# T=" << std::setprecision(17) << g.length() << " M=" << g.intervals() << '\n';
  os << "t,re,im\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << g.node(i) << ',' << f[i].real() << ',' << f[i].imag() << '\n';
  }
}

GridFunction read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# T=", 0) != 0) throw UsageError("missing '# T=<..> M=<..>' header");
  double T = 0.0;
  std::size_t M = 0;
  {
    std::istringstream hs(line.substr(4));
    std::string mpart;
    hs >> T >> mpart;
    if (!hs || mpart.rfind("M=", 0) != 0) throw UsageError("malformed grid header: " + line);
    M = static_cast<std::size_t>(std::stoul(mpart.substr(2)));
  }
  Grid grid(T, M);
  std::vector<cplx> v;
  v.reserve(grid.size());
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    std::istringstream ls(line);
    double t = 0, re = 0, im = 0;
    char c1 = 0, c2 = 0;
    ls >> t >> c1 >> re >> c2 >> im;
    if (!ls || c1 != ',' || c2 != ',') throw UsageError("malformed CSV row: " + line);
    v.emplace_back(re, im);
  }
  if (v.size() != grid.size()) throw ShapeError("CSV row count does not match M+1");
  return GridFunction(grid, std::move(v));
}

}  // namespace ccf
