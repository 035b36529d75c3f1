#pragma once

// Spectral sampler for the temporally white, spatially Coulomb-correlated
// noise potential, and the ensemble simulator of the stochastic phase.
//
// Units are dimensionless: lengths in units of the packet width a, times in
// units of m a^2 / hbar. The two-point function targeted by the sampler is
//   <phi(r, t) phi(r', t')> = coupling / |r - r'| * delta(t - t'),
// with coupling = 1 in these units. On the grid each time step carries an
// independent field scaled by 1/sqrt(dt).

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sndeco/grid.hpp"
#include "sndeco/packets.hpp"
#include "sndeco/parallel.hpp"
#include "sndeco/units.hpp"

namespace sndeco {

struct FieldGrid {
  int n;              // points per axis, power of two, >= 32
  double box_length;  // L_box
  double dt;          // time step
  int n_steps;        // n_steps * dt = horizon
  std::uint64_t seed;
  double coupling = 1.0;  // hbar G in the chosen units

  CubicGrid geometry() const { return {n, box_length}; }
  double spacing() const { return box_length / n; }
};

FieldGrid make_field_grid(int n, double box_length, double dt, int n_steps,
                          std::uint64_t seed, double coupling = 1.0);

/// Box sized for the packet pair: L = 8 max(rho, sqrt(1 + tau_max^2), 2),
/// dt = tau_max / n_steps.
FieldGrid auto_field_grid(const DimensionlessParams& d, int n, int n_steps,
                          std::uint64_t seed);

/// Lattice constant of the periodic Coulomb potential with a neutralising
/// background on a simple cubic box: G_periodic(r) = 1/r - xi/L + O(r^2/L^3).
inline constexpr double kCubicEwaldConstant = 2.8372974794806;

/// Covariance carried by the (nulled) k = 0 mode of the continuum field,
/// xi * coupling / L. Adding it back to an estimate of the zero-mean field's
/// covariance (already multiplied by dt) recovers coupling / r.
double zero_mode_covariance(const FieldGrid& grid);

/// One real field realisation on the grid.
struct Field {
  CubicGrid geometry;
  std::vector<double> values;
};

/// Samples fields for one grid. Holds an FFTW plan; the sampling methods are
/// const and safe to call concurrently as long as each thread uses its own
/// Workspace.
class NoiseFieldSampler {
 public:
  struct Workspace {
    std::vector<std::complex<double>> spectrum;
    std::vector<double> field;
  };

  explicit NoiseFieldSampler(const FieldGrid& grid);
  ~NoiseFieldSampler();
  NoiseFieldSampler(const NoiseFieldSampler&) = delete;
  NoiseFieldSampler& operator=(const NoiseFieldSampler&) = delete;

  const FieldGrid& grid() const { return grid_; }
  Workspace make_workspace() const;

  /// Writes the realisation for (member, step) into ws.field.
  void sample_into(std::uint64_t member, std::uint64_t step,
                   Workspace& ws) const;
  Field sample(std::uint64_t member, std::uint64_t step) const;

 private:
  FieldGrid grid_;
  int half_;                      // n/2 + 1
  std::vector<double> mode_std_;  // per half-spectrum index
  struct Plan;
  std::unique_ptr<Plan> plan_;
};

/// Field for (grid.seed, member, step). Builds a sampler per call; use
/// NoiseFieldSampler directly in loops.
Field sample_field_step(const FieldGrid& grid, std::uint64_t member,
                        std::uint64_t step);

struct CovarianceRow {
  double separation;
  double estimate;        // raw_estimate + zero_mode_covariance
  double standard_error;
  double raw_estimate;    // <phi(x) phi(x + r)> * dt of the zero-mean field
  double target;          // coupling / r
  std::array<double, 3> axis_estimate;  // per axis, zero mode restored
  std::array<double, 3> axis_standard_error;
};

/// Two-point function estimated from realisations (member = 0..n-1, step 0),
/// averaged over all grid points and the three axes. Separations must be
/// whole multiples of dx inside [dx, L/2].
std::vector<CovarianceRow> measured_covariance(
    const FieldGrid& grid, int n_realizations,
    std::span<const double> separations, const Parallelism& par = {});

struct PacketDensity {
  std::vector<double> values;
  double enclosed;  // sum(values) * dx^3
};

/// Density of `packet` at time t on the grid nodes. Throws
/// ConfigurationError when more than 1e-6 of the probability lies outside.
PacketDensity packet_density(const CubicGrid& grid,
                             const GaussianPacket& packet, double t,
                             const PhysicalConstants& c);

/// m sum_x |psi(x, t)|^2 phi(x) dx^3.
double smeared_potential(std::span<const double> field,
                         const PacketDensity& density, const CubicGrid& grid,
                         double mass);
double smeared_potential(const Field& field, const GaussianPacket& packet,
                         double t,
                         const PhysicalConstants& c = PhysicalConstants::natural());

struct EnsembleStats {
  std::uint64_t n_members;
  double mean;
  double variance;                    // unbiased
  double standard_error_of_variance;  // from the fourth central moment
};

EnsembleStats ensemble_stats(std::span<const double> samples);

inline constexpr int kMinMembers = 64;

struct SimulationOptions {
  Parallelism parallelism;
  /// Evaluate the deterministic self-gravity potential at both centres on
  /// every step and require it to be identical.
  bool check_self_gravity = true;
};

/// Ensemble variance of DeltaPhi = -sqrt(mu) sum_steps [V(r1) - V(r2)] dt,
/// both centres smeared against the same field. Packet widths follow
/// C1 = 1 + tau^2 evaluated at each step's midpoint.
EnsembleStats simulate_phase_variance(const DimensionlessParams& d,
                                      const FieldGrid& grid, int n_members,
                                      const SimulationOptions& opts = {});

/// Per-member phase differences, in member order.
std::vector<double> simulate_phase_differences(
    const DimensionlessParams& d, const FieldGrid& grid, int n_members,
    const SimulationOptions& opts = {});

}  // namespace sndeco
