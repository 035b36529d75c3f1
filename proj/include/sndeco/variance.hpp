#pragma once

#include "sndeco/quadrature.hpp"
#include "sndeco/units.hpp"

namespace sndeco {

/// Phase variance DeltaPhi^2 = I7 - I8, dimensionless.
struct VarianceBreakdown {
  double i7;
  double i8;
  double total;
  double quadrature_error_estimate;
};

/// Relative tolerance of every variance quadrature.
inline constexpr double kVarianceRelTol = 1e-10;

/// Below this scaled separation the small-rho analytic branch is used.
inline constexpr double kSmallRho = 1e-6;

/// I7 = (2 sqrt2 / sqrt pi) mu asinh(tau_max).
double i7(const DimensionlessParams& d);

/// I8 = (2 mu / rho) int_0^tau_max erf(rho / sqrt(2 (1 + tau^2))) dtau.
double i8(const DimensionlessParams& d);

/// Evaluates I7, I8 and their difference.
///
/// The difference is integrated directly in the cancellation-free form
///   total = 2 sqrt(2/pi) mu int_0^{asinh tau_max} h(rho / (sqrt2 cosh u)) du
/// with h = erf_deficit, which is the tau = sinh(u) image of I7 - I8. It is
/// non-negative, linear in mu, and non-decreasing in both rho and tau_max.
VarianceBreakdown phase_variance(const DimensionlessParams& d);

/// Only the total of phase_variance, with its quadrature error estimate.
QuadratureResult phase_variance_total(const DimensionlessParams& d);

/// beta = rho / (sqrt2 sqrt(1 + tau^2)).
double beta(double rho, double tau);

/// I(beta) = beta - int_0^beta exp(-x^2) dx.
double integrand_I_of_beta(double beta);

/// I(t) of the large-separation analysis, evaluated at beta(rho, tau). With
/// it, DeltaPhi^2 = (4 mu / (sqrt pi rho)) int_0^tau_max I dtau.
double integrand_I(double rho, double tau);

/// Leading short-time form 2 mu tau_max [sqrt(2/pi) - erf(rho/sqrt2)/rho],
/// i.e. DeltaPhi^2 with C1 frozen at a^2.
double phase_variance_frozen_width(const DimensionlessParams& d);

}  // namespace sndeco
