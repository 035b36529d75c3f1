#include "sndeco/units.hpp"

#include <cmath>
#include <stdexcept>

#include "sndeco/errors.hpp"

namespace sndeco {
namespace {

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw DomainError(field, "must be finite");
}

void require_positive(double v, const char* field) {
  require_finite(v, field);
  if (!(v > 0.0)) throw DomainError(field, "must be positive");
}

void require_non_negative(double v, const char* field) {
  require_finite(v, field);
  if (v < 0.0) throw DomainError(field, "must be non-negative");
}

void require_representable(double v, const char* field) {
  if (!std::isfinite(v)) {
    throw std::range_error(std::string(field) + ": overflow");
  }
}

}  // namespace

void validate(const PhysicalConstants& c) {
  require_positive(c.G, "G");
  require_positive(c.hbar, "hbar");
}

PacketPair make_params(double mass, double width, double separation,
                       double horizon) {
  require_positive(mass, "mass");
  require_positive(width, "width");
  require_non_negative(separation, "separation");
  require_positive(horizon, "horizon");
  return {mass, width, separation, horizon};
}

DimensionlessParams make_dimensionless(double mu, double rho, double tau_max) {
  require_positive(mu, "mu");
  require_non_negative(rho, "rho");
  require_positive(tau_max, "tau_max");
  return {mu, rho, tau_max};
}

DimensionlessParams nondimensionalize(const PacketPair& p,
                                      const PhysicalConstants& c) {
  validate(c);
  make_params(p.mass, p.width, p.separation, p.horizon);
  // Grouped so that intermediate products stay within double range for
  // anything from nucleons to kilogram masses.
  const double m_over_hbar = p.mass / c.hbar;
  const double mu = (c.G * p.mass) * (m_over_hbar * m_over_hbar) * p.width;
  const double rho = p.separation / p.width;
  const double tau_max = (p.horizon / m_over_hbar) / (p.width * p.width);
  require_representable(mu, "mu");
  require_representable(tau_max, "tau_max");
  if (mu == 0.0) throw std::range_error("mu: underflow");
  if (tau_max == 0.0) throw std::range_error("tau_max: underflow");
  return {mu, rho, tau_max};
}

PacketPair redimensionalize(const DimensionlessParams& d, double mass,
                            const PhysicalConstants& c) {
  validate(c);
  make_dimensionless(d.mu, d.rho, d.tau_max);
  require_positive(mass, "mass");
  const double hbar_over_m = c.hbar / mass;
  const double width = d.mu * (hbar_over_m * hbar_over_m) / (c.G * mass);
  const double horizon = d.tau_max * (width * width) / hbar_over_m;
  require_representable(width, "width");
  require_representable(horizon, "horizon");
  return {mass, width, d.rho * width, horizon};
}

double time_unit(double mass, double width, const PhysicalConstants& c) {
  return (mass / c.hbar) * width * width;
}

double spreading_width(const PacketPair& p, double t,
                       const PhysicalConstants& c) {
  require_finite(t, "t");
  if (t < 0.0) throw DomainError("t", "must be non-negative");
  const double tau = t / time_unit(p.mass, p.width, c);
  return p.width * p.width * spreading_factor(tau);
}

}  // namespace sndeco
