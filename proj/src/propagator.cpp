#include "ccf/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "ccf/errors.hpp"
#include "ccf/gridfn.hpp"
#include "ccf/quadrature.hpp"

namespace ccf {

namespace {

std::string trim(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\t') out.push_back(c);
  }
  return out;
}

double parse_real(const std::string& s, std::string_view whole) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw UsageError("bad complex number: " + std::string(whole));
    return x;
  } catch (const std::logic_error&) {
    throw UsageError("bad complex number: " + std::string(whole));
  }
}

// log cosh z without overflow.
cplx log_cosh(cplx z) {
  if (z.real() < 0.0) z = -z;
  return z + std::log(1.0 + std::exp(-2.0 * z)) - std::log(2.0);
}

}  // namespace

cplx parse_complex(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw UsageError("empty complex number");
  if (s.back() != 'i') return parse_real(s, text);
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not a leading sign or part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : body.substr(0, split);
  std::string im = split == std::string::npos ? body : body.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re, text), parse_real(im, text)};
}

DiagonalGenerator::DiagonalGenerator(std::vector<cplx> spectrum) : a_(std::move(spectrum)) {
  if (a_.empty()) throw DomainError("generator needs at least one mode");
  for (auto a : a_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw DomainError("generator spectrum must be finite");
  }
}

DiagonalGenerator DiagonalGenerator::l2_blowup(double T, int modes) {
  if (!(T > 0.0) || modes < 1) throw DomainError("l2 generator needs T > 0 and at least one mode");
  std::vector<cplx> a;
  for (int m = 1; m <= modes; ++m) {
    const double re = m / T;
    const double g = std::exp(static_cast<double>(m)) / m;
    a.emplace_back(re, 0.0);
    a.back() += cplx(0.0, 1.0) * std::sqrt(cplx(g * g - re * re));
  }
  return DiagonalGenerator(std::move(a));
}

DiagonalGenerator DiagonalGenerator::parse(std::string_view spec) {
  const std::string s = trim(spec);
  if (s.rfind("l2:", 0) == 0) {
    const auto colon = s.find(':', 3);
    if (colon == std::string::npos) throw UsageError("l2 generator spec is l2:<T>:<N>");
    const double T = parse_real(s.substr(3, colon - 3), spec);
    const double n = parse_real(s.substr(colon + 1), spec);
    try {
      return l2_blowup(T, static_cast<int>(n));
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
  std::vector<cplx> a;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    a.push_back(parse_complex(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return DiagonalGenerator(std::move(a));
}

PropagatorTable::PropagatorTable(DiagonalGenerator gen, std::optional<Kernel> kernel, Grid grid,
                                 std::vector<GridFunction> columns, bool log_scale)
    : gen_(std::move(gen)), kernel_(std::move(kernel)), grid_(grid), columns_(std::move(columns)), log_scale_(log_scale) {
  if (columns_.size() != gen_.size()) throw ShapeError("one column per mode required");
  for (const auto& c : columns_) {
    if (!(c.grid() == grid_)) throw ShapeError("column grid differs from table grid");
  }
}

cplx PropagatorTable::entry(std::size_t i, std::size_t m) const {
  if (log_scale_) throw UsageError("log-scale table has no linear entries");
  return columns_.at(m)[i];
}

cplx PropagatorTable::log_entry(std::size_t i, std::size_t m) const {
  const cplx v = columns_.at(m)[i];
  return log_scale_ ? v : std::log(v);
}

PropagatorTable PropagatorTable::truncated(std::size_t intervals) const {
  if (intervals > grid_.intervals()) throw ShapeError("cannot truncate to a longer grid");
  std::vector<GridFunction> cols;
  for (const auto& c : columns_) cols.push_back(c.resized(intervals));
  return PropagatorTable(gen_, kernel_, grid_.with_intervals(intervals), std::move(cols), log_scale_);
}

PropagatorTable base_cosine(const DiagonalGenerator& gen, const Grid& grid) {
  bool log_scale = false;
  for (auto a : gen.spectrum()) log_scale = log_scale || std::abs(a) * grid.length() > kLogScaleThreshold;
  std::vector<GridFunction> cols;
  for (auto a : gen.spectrum()) {
    if (log_scale) {
      cols.push_back(GridFunction::sample(grid, [a](double t) { return log_cosh(a * t); }));
    } else {
      cols.push_back(GridFunction::sample(grid, [a](double t) { return std::cosh(a * t); }));
    }
  }
  return PropagatorTable(gen, std::nullopt, grid, std::move(cols), log_scale);
}

namespace {

Kernel combine(const std::optional<Kernel>& existing, const Kernel& k, const Grid& grid) {
  if (!existing) return k;
  if (auto c = existing->analytic_convolution(k)) return *c;
  return Kernel::sampled(convolve(sample(*existing, grid), sample(k, grid)));
}

}  // namespace

PropagatorTable convolve_family(const PropagatorTable& table, const Kernel& k) {
  const auto& grid = table.grid();
  const quad::KernelQuadrature kq(k, grid.step(), grid.intervals());
  std::vector<GridFunction> cols(table.modes(), GridFunction::zeros(grid));
  const auto n = static_cast<std::ptrdiff_t>(table.modes());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t mm = 0; mm < n; ++mm) {
    const auto m = static_cast<std::size_t>(mm);
    const auto& col = table.column(m);
    if (!table.log_scale()) {
      cols[m] = kq.convolve(col, Backend::serial);
      continue;
    }
    // Scale by the column maximum, convolve, and return to logs.
    double top = -std::numeric_limits<double>::infinity();
    for (auto v : col.values()) top = std::max(top, v.real());
    const auto scaled = col.map([top](cplx v, double) { return std::exp(v - top); });
    const auto c = kq.convolve(scaled, Backend::serial);
    cols[m] = c.map([top](cplx v, double) { return std::log(v) + top; });
  }
  return PropagatorTable(table.generator(), combine(table.kernel(), k, grid), grid, std::move(cols),
                         table.log_scale());
}

GridFunction chi_conv_kernel(const std::optional<Kernel>& k, const Grid& grid) {
  const auto one = GridFunction::sample(grid, [](double) { return 1.0; });
  if (!k) return one;
  return convolve(*k, one);
}

GridFunction duhamel_residuals(const PropagatorTable& table, std::size_t m) {
  if (table.log_scale()) throw UsageError("Duhamel residual needs a linear-scale table");
  const auto& e = table.column(m);
  const cplx a2 = table.generator()[m] * table.generator()[m];
  const auto ie = second_antiderivative(e);
  const auto ck = chi_conv_kernel(table.kernel(), table.grid());
  std::vector<cplx> r(e.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::abs(a2 * ie[i] - e[i] + ck[i]);
  return GridFunction(table.grid(), std::move(r));
}

double duhamel_residual(const PropagatorTable& table, std::size_t m, double t) {
  return duhamel_residuals(table, m).at_time(t).real();
}

double family_log_norm(const PropagatorTable& table, double t) {
  const auto i = table.grid().index_of(t);
  if (!i) throw UsageError("time is not a grid node");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < table.modes(); ++m) {
    const cplx v = table.column(m)[*i];
    best = std::max(best, table.log_scale() ? v.real() : std::log(std::abs(v)));
  }
  return best;
}

double family_norm(const PropagatorTable& table, double t) { return std::exp(family_log_norm(table, t)); }

void write_csv(std::ostream& os, const PropagatorTable& table) {
  const auto& g = table.grid();
  os << "# T=" << std::setprecision(17) << g.length() << " M=" << g.intervals() << " N=" << table.modes()
     << " kernel=" << (table.kernel() ? table.kernel()->spec() : "delta")
     << " scale=" << (table.log_scale() ? "log" : "linear") << '\n';
  os << (table.log_scale() ? "t,m,logmag,phase\n" : "t,m,re,im\n");
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t m = 0; m < table.modes(); ++m) {
      const cplx v = table.column(m)[i];
      os << g.node(i) << ',' << m + 1 << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
}

}  // namespace ccf
