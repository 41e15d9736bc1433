#pragma once

#include "ccf/grid.hpp"

namespace ccf::closed {

/// (j_beta * cosh(a .))(t) = sum_j a^(2j) t^(beta + 2j) / Gamma(beta + 2j + 1).
cplx jbeta_cosh(double beta, cplx a, double t);
/// (chi01^{*n} * cosh(a .))(t) = sum_k (-1)^k C(n, k) (j_n * cosh(a .))(t - k).
cplx bspline_cosh(int n, cplx a, double t);
/// log sinh z, principal branch of the phase.
cplx log_sinh(cplx z);

}  // namespace ccf::closed
