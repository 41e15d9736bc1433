#pragma once

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <memory>
#include <stdexcept>
#include <string>

namespace ccf::detail {

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const noexcept { gsl_integration_workspace_free(w); }
};
using Workspace = std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter>;

inline Workspace make_workspace(std::size_t n = 2000) {
  gsl_set_error_handler_off();
  return Workspace(gsl_integration_workspace_alloc(n));
}

template <class F>
double gsl_trampoline(double x, void* p) {
  return (*static_cast<F*>(p))(x);
}

// Adaptive Gauss-Kronrod on [a, b]; QAGS handles integrable endpoint singularities.
template <class F>
double integrate_qags(F&& f, double a, double b, double epsrel, double* abserr = nullptr) {
  using Fn = std::remove_reference_t<F>;
  auto ws = make_workspace();
  gsl_function gf{&gsl_trampoline<Fn>, const_cast<void*>(static_cast<const void*>(&f))};
  double result = 0.0, err = 0.0;
  const int status = gsl_integration_qags(&gf, a, b, 0.0, epsrel, 2000, ws.get(), &result, &err);
  if (status != GSL_SUCCESS && status != GSL_EROUND && status != GSL_ETOL) {
    throw std::runtime_error(std::string("adaptive quadrature failed: ") + gsl_strerror(status));
  }
  if (abserr) *abserr = err;
  return result;
}

template <class F>
double integrate_qag(F&& f, double a, double b, double epsrel) {
  using Fn = std::remove_reference_t<F>;
  auto ws = make_workspace();
  gsl_function gf{&gsl_trampoline<Fn>, const_cast<void*>(static_cast<const void*>(&f))};
  double result = 0.0, err = 0.0;
  const int status = gsl_integration_qag(&gf, a, b, 0.0, epsrel, 2000, GSL_INTEG_GAUSS61, ws.get(), &result, &err);
  if (status != GSL_SUCCESS && status != GSL_EROUND && status != GSL_ETOL) {
    throw std::runtime_error(std::string("adaptive quadrature failed: ") + gsl_strerror(status));
  }
  return result;
}

}  // namespace ccf::detail
