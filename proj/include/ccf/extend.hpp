#pragma once

#include <vector>

#include "ccf/propagator.hpp"

namespace ccf {

/// C_k on [0, nu] and C_{k^{*n}} on [0, n nu], both on the same step, plus the
/// kernels k and k^{*n}.
struct ExtensionInput {
  PropagatorTable base;
  PropagatorTable prev;
  Kernel k;
  Kernel k_n;
  double nu;
  int n;
};

struct ExtendOptions {
  /// 1..5 skips that term of the second branch (negative control); 0 keeps all.
  int drop_term = 0;
};

/// C_{k^{*(n+1)}} on [0, (n+1) nu].
///
///   t <= n nu:  int_0^t k(t-r) C_n(r) dr
///   t >= n nu:  2 C_n(n nu) C_k(s) + int_0^{n nu} k(t-r) C_n(r) dr + int_0^s k^{*n}(t-r) C_k(r) dr
///               - int_{n nu - s}^{n nu} k(r+t-2n nu) C_n(r) dr - int_0^s k^{*n}(r-t+2n nu) C_k(r) dr
/// with s = t - n nu and C_n = C_{k^{*n}}.
PropagatorTable extend_step(const ExtensionInput& in, const ExtendOptions& opt = {});

/// |first branch - second branch| at t = n nu, max over modes.
double seam_mismatch(const ExtensionInput& in);

enum class PowerMode {
  analytic,  // closed-form k^{*n}
  numeric,   // repeated numeric convolution of the samples of k
};

/// Tables C_{k^{*(j+1)}} on [0, (j+1) nu] for j = 0..n_max; entry 0 is `base`.
std::vector<PropagatorTable> extend_all(const PropagatorTable& base, const Kernel& k, int n_max,
                                        PowerMode mode = PowerMode::numeric, const ExtendOptions& opt = {});
PropagatorTable extend_full(const PropagatorTable& base, const Kernel& k, int n_max,
                            PowerMode mode = PowerMode::numeric, const ExtendOptions& opt = {});

/// extend_full for k = j_alpha with analytic powers j_{n alpha}.
PropagatorTable fractional_extend(const PropagatorTable& base, double alpha, int n_max);

/// Applies the n = 1 step `m` times (doubling the interval and the kernel
/// power each time); the result covers [0, 2^m nu].
PropagatorTable iterate_doubling(const PropagatorTable& base, const Kernel& k, int m,
                                 PowerMode mode = PowerMode::numeric);

/// max |iterate_doubling(m) - extend_full(2^m - 1)| over the common range.
double iterated_vs_one_shot(const PropagatorTable& base, const Kernel& k, int m, PowerMode mode = PowerMode::numeric);

}  // namespace ccf
