#pragma once

#include <functional>

namespace sndeco {

struct QuadratureResult {
  double value;
  double error_estimate;  // absolute
};

/// Adaptive 15-point Gauss-Kronrod (QUADPACK QAG) on the finite interval
/// [lo, hi].
///
/// Converged means error_estimate <= max(abs_tol, rel_tol * |value|).
/// Otherwise NumericalError is thrown carrying the relative error that was
/// actually achieved.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi, double rel_tol,
                                    double abs_tol = 0.0);

}  // namespace sndeco
