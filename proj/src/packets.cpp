#include "sndeco/packets.hpp"

#include <cmath>

#include "sndeco/errors.hpp"
#include "sndeco/special.hpp"

namespace sndeco {
namespace {

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw DomainError("t", "must be finite and non-negative");
  }
}

}  // namespace

GaussianPacket make_packet(const Eigen::Vector3d& center, double width,
                           double mass) {
  if (!center.allFinite()) throw DomainError("center", "must be finite");
  if (!std::isfinite(width) || !(width > 0.0)) {
    throw DomainError("width", "must be positive");
  }
  if (!std::isfinite(mass) || !(mass > 0.0)) {
    throw DomainError("mass", "must be positive");
  }
  return {center, width, mass};
}

double spreading_width(const GaussianPacket& packet, double t,
                       const PhysicalConstants& c) {
  require_time(t);
  const double tau = t / time_unit(packet.mass, packet.width, c);
  return packet.width * packet.width * spreading_factor(tau);
}

double density(const GaussianPacket& packet, const Eigen::Vector3d& point,
               double t, const PhysicalConstants& c) {
  const double c1 = spreading_width(packet, t, c);
  const double r2 = (point - packet.center).squaredNorm();
  return std::pow(kPi * c1, -1.5) * std::exp(-r2 / c1);
}

std::vector<double> density_on_grid(const GaussianPacket& packet, double t,
                                    const CubicGrid& grid,
                                    const PhysicalConstants& c) {
  const double c1 = spreading_width(packet, t, c);
  const double norm = std::pow(kPi * c1, -1.5);
  // The Gaussian factorises over axes.
  std::vector<double> fx(grid.n), fy(grid.n), fz(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.coordinate(i);
    fx[i] = std::exp(-(x - packet.center.x()) * (x - packet.center.x()) / c1);
    fy[i] = std::exp(-(x - packet.center.y()) * (x - packet.center.y()) / c1);
    fz[i] = std::exp(-(x - packet.center.z()) * (x - packet.center.z()) / c1);
  }
  std::vector<double> out(grid.size());
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      const double fij = norm * fx[i] * fy[j];
      double* row = out.data() + grid.index(i, j, 0);
      for (int k = 0; k < grid.n; ++k) row[k] = fij * fz[k];
    }
  }
  return out;
}

double self_potential_at_center(const GaussianPacket& packet, double t,
                                const PhysicalConstants& c) {
  const double c1 = spreading_width(packet, t, c);
  return 2.0 * c.G * packet.mass / (kSqrtPi * std::sqrt(c1));
}

}  // namespace sndeco
