#include "sndeco/quadrature.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "sndeco/errors.hpp"

namespace sndeco {
namespace {

constexpr std::size_t kMaxIntervals = 2000;

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const {
    gsl_integration_workspace_free(w);
  }
};

double trampoline(double x, void* params) {
  return (*static_cast<const std::function<double(double)>*>(params))(x);
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi, double rel_tol,
                                    double abs_tol) {
  static std::once_flag silence;
  std::call_once(silence, [] { gsl_set_error_handler_off(); });

  if (lo == hi) return {0.0, 0.0};
  std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> work(
      gsl_integration_workspace_alloc(kMaxIntervals));
  gsl_function fn;
  fn.function = &trampoline;
  fn.params = const_cast<std::function<double(double)>*>(&f);

  double value = 0.0;
  double error = 0.0;
  const int status =
      gsl_integration_qag(&fn, lo, hi, abs_tol, rel_tol, kMaxIntervals,
                          GSL_INTEG_GAUSS15, work.get(), &value, &error);
  if (!std::isfinite(value)) {
    throw NumericalError("quadrature produced a non-finite value", HUGE_VAL);
  }
  if (status != GSL_SUCCESS &&
      error > std::max(abs_tol, rel_tol * std::fabs(value))) {
    const double achieved = value != 0.0 ? error / std::fabs(value) : error;
    throw NumericalError(std::string("quadrature did not converge: ") +
                             gsl_strerror(status) + " (achieved relative " +
                             std::to_string(achieved) + ")",
                         achieved);
  }
  return {value, error};
}

}  // namespace sndeco
