#include "ccf/parallel.hpp"

#include <fftw3.h>
#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <string>

namespace ccf {
namespace detail {

std::vector<cplx> discrete_convolution_serial(std::span<const cplx> a, std::span<const cplx> b, std::size_t n_out) {
  std::vector<cplx> c(n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    cplx s{};
    const std::size_t j_hi = std::min(i, a.size() - 1);
    for (std::size_t j = (i >= b.size() ? i - b.size() + 1 : 0); j <= j_hi; ++j) s += a[j] * b[i - j];
    c[i] = s;
  }
  return c;
}

std::vector<cplx> discrete_convolution_parallel(std::span<const cplx> a, std::span<const cplx> b, std::size_t n_out) {
  std::vector<cplx> c(n_out);
  const auto n = static_cast<std::ptrdiff_t>(n_out);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    cplx s{};
    const std::size_t j_hi = std::min(i, a.size() - 1);
    for (std::size_t j = (i >= b.size() ? i - b.size() + 1 : 0); j <= j_hi; ++j) s += a[j] * b[i - j];
    c[i] = s;
  }
  return c;
}

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : p(fftw_alloc_complex(n)) {}
  ~FftwBuffer() { fftw_free(p); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* p;
};

struct FftwPlan {
  FftwPlan(int n, fftw_complex* in, fftw_complex* out, int sign) {
    std::lock_guard lock(planner_mutex());
    p = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE);
  }
  ~FftwPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  fftw_plan p;
};

}  // namespace

std::vector<cplx> discrete_convolution_fft(std::span<const cplx> a, std::span<const cplx> b, std::size_t n_out) {
  std::size_t n = 1;
  while (n < a.size() + b.size()) n <<= 1;
  FftwBuffer fa(n), fb(n);
  auto* za = reinterpret_cast<cplx*>(fa.p);
  auto* zb = reinterpret_cast<cplx*>(fb.p);
  std::fill(za, za + n, cplx{});
  std::fill(zb, zb + n, cplx{});
  std::copy(a.begin(), a.end(), za);
  std::copy(b.begin(), b.end(), zb);
  {
    FftwPlan pa(static_cast<int>(n), fa.p, fa.p, FFTW_FORWARD);
    FftwPlan pb(static_cast<int>(n), fb.p, fb.p, FFTW_FORWARD);
    fftw_execute(pa.p);
    fftw_execute(pb.p);
  }
  for (std::size_t k = 0; k < n; ++k) za[k] *= zb[k];
  {
    FftwPlan inv(static_cast<int>(n), fa.p, fa.p, FFTW_BACKWARD);
    fftw_execute(inv.p);
  }
  std::vector<cplx> c(n_out);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n_out && i < n; ++i) c[i] = za[i] * scale;
  return c;
}

}  // namespace detail

std::vector<cplx> discrete_convolution(std::span<const cplx> a, std::span<const cplx> b, std::size_t n_out,
                                       Backend backend) {
  if (a.empty() || b.empty()) return std::vector<cplx>(n_out);
  switch (backend) {
    case Backend::serial:
      return detail::discrete_convolution_serial(a, b, n_out);
    case Backend::parallel:
      return detail::discrete_convolution_parallel(a, b, n_out);
    case Backend::fft:
      return detail::discrete_convolution_fft(a, b, n_out);
    case Backend::automatic:
      break;
  }
  if (n_out > kFftThreshold) return detail::discrete_convolution_fft(a, b, n_out);
  return detail::discrete_convolution_parallel(a, b, n_out);
}

void apply_thread_limit_from_env() {
  if (const char* s = std::getenv("CCF_THREADS")) {
    try {
      const int n = std::stoi(s);
      if (n > 0) omp_set_num_threads(n);
    } catch (const std::exception&) {
      // ignored: malformed value leaves the OpenMP default
    }
  }
}

}  // namespace ccf
