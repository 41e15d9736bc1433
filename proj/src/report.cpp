#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "ccf/errors.hpp"
#include "ccf/harness.hpp"

namespace ccf {

bool Report::all_pass() const { return failures() == 0; }

std::size_t Report::failures() const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.pass ? 0 : 1;
  return n;
}

void Report::append(const Report& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
  for (const auto& e : other.environment) {
    bool seen = false;
    for (const auto& f : environment) seen = seen || f.first == e.first;
    if (!seen) environment.push_back(e);
  }
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_json(std::ostream& os, const Report& r) {
  nlohmann::json j;
  j["schema"] = 1;
  j["suite"] = r.suite;
  j["environment"] = nlohmann::json::object();
  for (const auto& [k, v] : r.environment) j["environment"][k] = v;
  j["records"] = nlohmann::json::array();
  for (const auto& rec : r.records) {
    nlohmann::json x{{"name", rec.name}, {"anchor", rec.anchor}, {"params", rec.params},
                     {"value", number(rec.value)}, {"tolerance", number(rec.tolerance)}, {"pass", rec.pass}};
    x["M"] = rec.cells ? nlohmann::json(*rec.cells) : nlohmann::json(nullptr);
    x["order"] = rec.order ? number(*rec.order) : nlohmann::json(nullptr);
    j["records"].push_back(std::move(x));
  }
  j["pass"] = r.all_pass();
  os << j.dump(2) << '\n';
}

void write_csv(std::ostream& os, const Report& r) {
  os << "# suite=" << r.suite;
  for (const auto& [k, v] : r.environment) os << ' ' << k << '=' << v;
  os << "\nsuite,name,params,M,value,tolerance,order,pass,anchor\n";
  os << std::setprecision(10);
  for (const auto& rec : r.records) {
    os << r.suite << ',' << rec.name << ',' << csv_field(rec.params) << ',';
    if (rec.cells) os << *rec.cells;
    os << ',' << rec.value << ',' << rec.tolerance << ',';
    if (rec.order) os << *rec.order;
    os << ',' << (rec.pass ? "pass" : "fail") << ',' << csv_field(rec.anchor) << '\n';
  }
}

void write_report(const std::string& path, Format format, const Report& r) {
  auto emit = [&](std::ostream& os) { format == Format::json ? write_json(os, r) : write_csv(os, r); };
  if (path.empty() || path == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  emit(f);
  if (!f) throw IoError("write failed: " + path);
}

void RunConfig::validate() const {
  if (ladder.size() < 2) throw UsageError("grid ladder needs at least two rungs");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i] <= ladder[i - 1]) throw UsageError("grid ladder must be strictly increasing");
  }
  if (ladder.front() < 8) throw UsageError("grid ladder rungs must have at least 8 cells");
  if (!(T > 0.0) || !std::isfinite(T)) throw UsageError("T must be positive");
  if (drop_term < 0 || drop_term > 5) throw UsageError("drop_term must be in 0..5");
}

double fitted_order(std::span<const double> steps, std::span<const double> values) {
  const std::size_t n = steps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(steps[i]), y = std::log(values[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void add_ladder(Report& r, const LadderSpec& spec, std::span<const std::size_t> cells, std::span<const double> steps,
                std::span<const double> values) {
  const double c = values[0] / std::pow(steps[0], spec.exponent);
  std::vector<double> hs, vs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    Record rec{spec.name, spec.anchor, spec.params, cells[i], values[i], 0.0, false, std::nullopt};
    rec.tolerance = i == 0 ? values[0] : 1.5 * c * std::pow(steps[i], spec.exponent);
    rec.tolerance = std::max(rec.tolerance, spec.floor);
    rec.pass = std::isfinite(values[i]) && values[i] <= rec.tolerance;
    r.records.push_back(rec);
    if (values[i] > spec.floor) {
      hs.push_back(steps[i]);
      vs.push_back(values[i]);
    }
  }
  Record ord{spec.name + ".order", spec.anchor, spec.params, std::nullopt, 0.0, spec.order_lo, true, std::nullopt};
  if (hs.size() >= 2) {
    const double p = fitted_order(hs, vs);
    ord.value = p;
    ord.order = p;
    ord.pass = std::isfinite(p) && p >= spec.order_lo && (!spec.order_hi || p <= *spec.order_hi);
  } else {
    ord.value = std::numeric_limits<double>::quiet_NaN();
  }
  r.records.push_back(ord);
}

}  // namespace ccf
