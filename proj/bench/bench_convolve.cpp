// Timings of the convolution backends and the extension step.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "ccf/extend.hpp"
#include "ccf/gridfn.hpp"
#include "ccf/parallel.hpp"

using namespace ccf;

namespace {

template <class F>
double seconds(F&& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_limit_from_env();
  const std::size_t top = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 16384;
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  std::printf("%8s %12s %12s %12s %12s\n", "n", "serial_s", "openmp_s", "fft_s", "max_diff");
  for (std::size_t n = 256; n <= top; n *= 2) {
    std::vector<cplx> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = {nd(rng), nd(rng)}, b[i] = {nd(rng), nd(rng)};
    std::vector<cplx> rs, rp, rf;
    const int reps = n <= 2048 ? 5 : 1;
    const double ts = seconds([&] { rs = discrete_convolution(a, b, n, Backend::serial); }, reps);
    const double tp = seconds([&] { rp = discrete_convolution(a, b, n, Backend::parallel); }, reps);
    const double tf = seconds([&] { rf = discrete_convolution(a, b, n, Backend::fft); }, reps);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d = std::max({d, std::abs(rs[i] - rp[i]), std::abs(rs[i] - rf[i])});
    std::printf("%8zu %12.4e %12.4e %12.4e %12.3e\n", n, ts, tp, tf, d);
  }

  std::printf("\n%8s %10s %12s\n", "cells", "kernel", "extend_s");
  const DiagonalGenerator gen({0.0, 1.0, cplx(0, 2), cplx(1, 1)});
  for (std::size_t J : {128, 256, 512}) {
    for (const auto& k : {Kernel::jalpha(1.0), Kernel::jalpha(0.5), Kernel::chi01()}) {
      const auto base = convolve_family(base_cosine(gen, Grid(1.0, J)), k);
      const double t = seconds([&] { extend_full(base, k, 3, PowerMode::analytic); }, 1);
      std::printf("%8zu %10s %12.4e\n", J, k.spec().c_str(), t);
    }
  }
}
