#pragma once

// Physical constants and the SI <-> dimensionless map.
//
// Every numerical module works on DimensionlessParams:
//   mu      = G m^3 a / hbar^2   (gravitational strength)
//   rho     = R / a              (scaled separation)
//   tau_max = hbar T / (m a^2)   (scaled horizon)
// Lengths are measured in units of a and times in units of m a^2 / hbar.

namespace sndeco {

struct PhysicalConstants {
  double G = 6.67430e-11;         // m^3 kg^-1 s^-2, CODATA 2018
  double hbar = 1.054571817e-34;  // J s, CODATA 2018

  static constexpr PhysicalConstants codata2018() { return {}; }
  /// G = hbar = 1, for unit tests and dimensionless work.
  static constexpr PhysicalConstants natural() { return {1.0, 1.0}; }
};

void validate(const PhysicalConstants& c);

/// Two superposed Gaussian packets in SI units.
struct PacketPair {
  double mass;        // kg
  double width;       // initial Gaussian width a, m
  double separation;  // R = |r1 - r2|, m
  double horizon;     // T, s
};

struct DimensionlessParams {
  double mu;
  double rho;
  double tau_max;
};

PacketPair make_params(double mass, double width, double separation,
                       double horizon);

DimensionlessParams make_dimensionless(double mu, double rho, double tau_max);

DimensionlessParams nondimensionalize(
    const PacketPair& p, const PhysicalConstants& c = PhysicalConstants{});

/// Inverse of nondimensionalize. The mass is not recoverable from
/// (mu, rho, tau_max) and has to be supplied.
PacketPair redimensionalize(const DimensionlessParams& d, double mass,
                            const PhysicalConstants& c = PhysicalConstants{});

/// m a^2 / hbar, the unit of time of the dimensionless representation.
double time_unit(double mass, double width,
                 const PhysicalConstants& c = PhysicalConstants{});

/// C1(t) = a^2 (1 + hbar^2 t^2 / m^2 a^4) in m^2.
double spreading_width(const PacketPair& p, double t,
                       const PhysicalConstants& c = PhysicalConstants{});

/// C1 / a^2 = 1 + tau^2.
inline double spreading_factor(double tau) { return 1.0 + tau * tau; }

}  // namespace sndeco
