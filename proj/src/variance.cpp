#include "sndeco/variance.hpp"

#include <cmath>

#include "sndeco/errors.hpp"
#include "sndeco/quadrature.hpp"
#include "sndeco/special.hpp"

namespace sndeco {
namespace {

constexpr double kI7Prefactor = 2.0 * kSqrt2OverPi;  // 2 sqrt2 / sqrt pi

// int_0^U h(rho / (sqrt2 cosh u)) du
QuadratureResult deficit_integral(double rho, double upper) {
  const double scale = rho / std::sqrt(2.0);
  return integrate_adaptive(
      [scale](double u) { return erf_deficit(scale / std::cosh(u)); }, 0.0,
      upper, kVarianceRelTol);
}

// small-rho branch: h(x) ~ x^2/3 - x^4/10, int sech^2 = tanh,
// int sech^4 = tanh - tanh^3/3
double small_rho_deficit_integral(double rho, double upper) {
  const double s2 = rho * rho / 2.0;
  const double th = std::tanh(upper);
  return s2 / 3.0 * th - s2 * s2 / 10.0 * (th - th * th * th / 3.0);
}

}  // namespace

double i7(const DimensionlessParams& d) {
  return kI7Prefactor * d.mu * std::asinh(d.tau_max);
}

double i8(const DimensionlessParams& d) {
  make_dimensionless(d.mu, d.rho, d.tau_max);
  if (d.rho < kSmallRho) {
    return i7(d) - kI7Prefactor * d.mu *
                       small_rho_deficit_integral(d.rho, std::asinh(d.tau_max));
  }
  const double scale = d.rho / std::sqrt(2.0);
  const auto q = integrate_adaptive(
      [scale](double u) {
        const double ch = std::cosh(u);
        return std::erf(scale / ch) * ch;
      },
      0.0, std::asinh(d.tau_max), kVarianceRelTol);
  return 2.0 * d.mu / d.rho * q.value;
}

QuadratureResult phase_variance_total(const DimensionlessParams& d) {
  make_dimensionless(d.mu, d.rho, d.tau_max);
  const double upper = std::asinh(d.tau_max);
  const double scale = kI7Prefactor * d.mu;
  if (d.rho == 0.0) return {0.0, 0.0};
  if (d.rho < kSmallRho) {
    return {scale * small_rho_deficit_integral(d.rho, upper), 0.0};
  }
  const auto q = deficit_integral(d.rho, upper);
  return {scale * q.value, scale * q.error_estimate};
}

VarianceBreakdown phase_variance(const DimensionlessParams& d) {
  const auto total = phase_variance_total(d);
  const double first = i7(d);
  if (d.rho < kSmallRho) {
    return {first, first - total.value, total.value, 0.0};
  }
  return {first, i8(d), total.value, total.error_estimate};
}

double beta(double rho, double tau) {
  if (!(rho >= 0.0)) throw DomainError("rho", "must be non-negative");
  return rho / (std::sqrt(2.0) * std::sqrt(spreading_factor(tau)));
}

double integrand_I_of_beta(double b) { return b * erf_deficit(b); }

double integrand_I(double rho, double tau) {
  return integrand_I_of_beta(beta(rho, tau));
}

double phase_variance_frozen_width(const DimensionlessParams& d) {
  make_dimensionless(d.mu, d.rho, d.tau_max);
  // sqrt(2/pi) - erf(rho/sqrt2)/rho = sqrt(2/pi) h(rho/sqrt2)
  return 2.0 * d.mu * d.tau_max * kSqrt2OverPi *
         erf_deficit(d.rho / std::sqrt(2.0));
}

}  // namespace sndeco
