#pragma once

#include "ccf/grid.hpp"
#include "ccf/kernels.hpp"
#include "ccf/parallel.hpp"

namespace ccf {

/// How a convolution integral is discretized.
///   trapezoid:  composite trapezoid on the products of samples.
///   product:    exact kernel moments against the linear interpolant of the
///               other factor; needs one factor sampled from an analytic Kernel.
///   automatic:  product when a factor carries a Kernel source, else trapezoid.
enum class QuadratureRule { automatic, trapezoid, product };

/// Convergence exponent both rules reach on smooth data.
inline constexpr double kExpectedOrder = 2.0;

/// (f * g)(t_i) = int_0^{t_i} f(t_i - s) g(s) ds.
GridFunction convolve(const GridFunction& f, const GridFunction& g, QuadratureRule rule = QuadratureRule::automatic,
                      Backend backend = Backend::automatic);
GridFunction convolve(const Kernel& k, const GridFunction& g, Backend backend = Backend::automatic);

/// (f o g)(t_i) = int_{t_i}^{T} f(s - t_i) g(s) ds.
GridFunction dual_convolve(const GridFunction& f, const GridFunction& g, QuadratureRule rule = QuadratureRule::automatic,
                           Backend backend = Backend::automatic);
GridFunction dual_convolve(const Kernel& k, const GridFunction& g, Backend backend = Backend::automatic);

/// f *_c g = (f * g + f o g + g o f) / 2.
GridFunction cosine_convolve(const GridFunction& f, const GridFunction& g, Backend backend = Backend::automatic);

/// k^{*n} by repeated convolution with k; n >= 1.
GridFunction convolution_power(const GridFunction& k, int n, Backend backend = Backend::automatic);

/// int_0^t f and int_0^t (t - s) f(s) ds.
GridFunction antiderivative(const GridFunction& f);
GridFunction second_antiderivative(const GridFunction& f);

/// Second-order finite differences; order is 1 or 2.
GridFunction derivative(const GridFunction& f, int order);

/// int_0^T exp(-lambda t) f(t) dt.
cplx laplace_transform(const GridFunction& f, cplx lambda);

/// int_0^T f and int_0^T f g.
cplx integrate(const GridFunction& f);
cplx pairing(const GridFunction& f, const GridFunction& g);

}  // namespace ccf
