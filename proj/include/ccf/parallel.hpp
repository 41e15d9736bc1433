#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ccf/grid.hpp"

namespace ccf {

/// Execution strategy for the O(M^2) convolution sums.
enum class Backend {
  automatic,  // parallel below the FFT threshold, FFT above it
  serial,     // reference implementation
  parallel,   // OpenMP over output nodes
  fft,        // FFTW, zero-padded to a power of two
};

/// First `n_out` entries of the linear convolution c[i] = sum_j a[j] b[i-j].
std::vector<cplx> discrete_convolution(std::span<const cplx> a, std::span<const cplx> b, std::size_t n_out,
                                       Backend backend = Backend::automatic);

namespace detail {
std::vector<cplx> discrete_convolution_serial(std::span<const cplx> a, std::span<const cplx> b, std::size_t n_out);
std::vector<cplx> discrete_convolution_parallel(std::span<const cplx> a, std::span<const cplx> b, std::size_t n_out);
std::vector<cplx> discrete_convolution_fft(std::span<const cplx> a, std::span<const cplx> b, std::size_t n_out);
}  // namespace detail

/// Output length above which Backend::automatic switches to FFT.
inline constexpr std::size_t kFftThreshold = 4096;

/// Caps OpenMP threads from the CCF_THREADS environment variable, if set.
void apply_thread_limit_from_env();

}  // namespace ccf
