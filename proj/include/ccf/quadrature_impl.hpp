#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccf::quad {

namespace detail {

inline int points_for_distance(double d) noexcept {
  if (d < 1.5) return 14;
  if (d < 3.0) return 10;
  if (d < 8.0) return 6;
  return 4;
}

}  // namespace detail

template <class F>
HatMoments hat_moments_range(F&& f, double a, double h, double lo, double hi, std::span<const Singularity> sing,
                             std::span<const double> breaks) {
  const double tol = 1e-9 * h;
  const double b = hi;

  // Split points: breakpoints and singular points strictly inside the cell.
  double cuts[16];
  int ncut = 0;
  cuts[ncut++] = lo;
  auto add_cut = [&](double p) {
    if (p > lo + tol && p < b - tol && ncut < 15) cuts[ncut++] = p;
  };
  for (double p : breaks) add_cut(p);
  for (const auto& s : sing) add_cut(s.at);
  cuts[ncut++] = b;
  std::sort(cuts, cuts + ncut);

  HatMoments m;
  for (int k = 0; k + 1 < ncut; ++k) {
    const double c = cuts[k], d = cuts[k + 1];
    const double len = d - c;
    if (len <= tol) continue;
    double pl = 0.0, pr = 0.0;
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& s : sing) {
      if (std::abs(s.at - c) <= tol) {
        pl += s.exponent;
      } else if (std::abs(s.at - d) <= tol) {
        pr += s.exponent;
      } else {
        const double gap = s.at < c ? c - s.at : s.at - d;
        dist = std::min(dist, gap / len);
      }
    }
    int n = detail::points_for_distance(dist);
    if ((pl != 0.0 || pr != 0.0) && n < 8) n = 8;
    const CellRule& rule = cell_rule(pl, pr, n);
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
      const double r = c + len * rule.x[q];
      const double val = f(r) * rule.w[q] * len;
      const double xi = (r - a) / h;
      m.left += val * (1.0 - xi);
      m.right += val * xi;
    }
  }
  return m;
}

template <class F>
HatMoments hat_moments(F&& f, double a, double h, std::span<const Singularity> sing, std::span<const double> breaks) {
  return hat_moments_range(f, a, h, a, a + h, sing, breaks);
}

namespace detail {

template <class F>
HatMoments adaptive_range(F& f, double a, double h, double lo, double hi, const HatMoments& whole,
                          std::span<const Singularity> sing, std::span<const double> breaks, double abs_tol,
                          int depth) {
  const double mid = 0.5 * (lo + hi);
  const auto l = hat_moments_range(f, a, h, lo, mid, sing, breaks);
  const auto r = hat_moments_range(f, a, h, mid, hi, sing, breaks);
  HatMoments sum{l.left + r.left, l.right + r.right};
  const double diff = std::abs(sum.left - whole.left) + std::abs(sum.right - whole.right);
  const double scale = std::abs(sum.left) + std::abs(sum.right);
  if (depth == 0 || diff <= 1e-13 * scale + abs_tol) return sum;
  const auto l2 = adaptive_range(f, a, h, lo, mid, l, sing, breaks, 0.5 * abs_tol, depth - 1);
  const auto r2 = adaptive_range(f, a, h, mid, hi, r, sing, breaks, 0.5 * abs_tol, depth - 1);
  return {l2.left + r2.left, l2.right + r2.right};
}

}  // namespace detail

template <class F>
HatMoments hat_moments_adaptive(F&& f, double a, double h, std::span<const Singularity> sing,
                                std::span<const double> breaks, double abs_tol) {
  const auto whole = hat_moments(f, a, h, sing, breaks);
  return detail::adaptive_range(f, a, h, a, a + h, whole, sing, breaks, abs_tol, 30);
}

}  // namespace ccf::quad
