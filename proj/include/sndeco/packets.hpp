#pragma once

#include <vector>

#include <Eigen/Core>

#include "sndeco/grid.hpp"
#include "sndeco/units.hpp"

namespace sndeco {

/// Free Gaussian wavepacket: only its probability density is modelled.
struct GaussianPacket {
  Eigen::Vector3d center;
  double width;  // initial width a
  double mass;
};

GaussianPacket make_packet(const Eigen::Vector3d& center, double width,
                           double mass);

/// C1(t) = a^2 (1 + hbar^2 t^2 / m^2 a^4).
double spreading_width(const GaussianPacket& packet, double t,
                       const PhysicalConstants& c = PhysicalConstants{});

/// |psi(point, t)|^2 = (pi C1)^{-3/2} exp(-|point - center|^2 / C1).
double density(const GaussianPacket& packet, const Eigen::Vector3d& point,
               double t, const PhysicalConstants& c = PhysicalConstants{});

/// Density sampled on every node of `grid` (no periodic wrapping).
std::vector<double> density_on_grid(
    const GaussianPacket& packet, double t, const CubicGrid& grid,
    const PhysicalConstants& c = PhysicalConstants{});

/// G m int |psi_c(r', t)|^2 / |c - r'| d^3r' = 2 G m / sqrt(pi C1).
///
/// The integral is taken relative to the packet's own center, so the result
/// does not depend on where the packet sits.
double self_potential_at_center(
    const GaussianPacket& packet, double t,
    const PhysicalConstants& c = PhysicalConstants{});

}  // namespace sndeco
