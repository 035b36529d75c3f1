#pragma once

// Brute-force checks of the spatial integrals behind the phase variance.
//
// All Monte Carlo estimates sample positions from the Gaussian densities
// (pi C1)^{-3/2} exp(-|z|^2 / C1) themselves, so only the Coulomb factor is
// averaged. Values are per unit kappa = G m^2 / hbar.

#include <cstdint>

#include "sndeco/parallel.hpp"

namespace sndeco {

struct McEstimate {
  double value;
  double standard_error;
  std::uint64_t n_samples;
  std::uint64_t seed;
};

inline constexpr std::uint64_t kMinOracleSamples = 10000;

/// Samples per deterministic reduction block.
inline constexpr std::uint64_t kOracleBlock = 4096;

/// E[1/|z' - z''|] with z', z'' independent packets at the origin.
/// Closed form: sqrt(2/pi) / sqrt(C1).
McEstimate mc_i4_spatial(double c1, std::uint64_t n, std::uint64_t seed,
                         const Parallelism& par = {});

/// E[-2/|z' - z''|] with z' at the origin and z'' displaced by R.
/// Closed form: -(2/R) erf(R / sqrt(2 C1)).
McEstimate mc_i6_spatial(double c1, double separation, std::uint64_t n,
                         std::uint64_t seed, const Parallelism& par = {});

double i4_spatial_closed_form(double c1);
double i6_spatial_closed_form(double c1, double separation);

struct SnCancellationReport {
  /// self_potential_at_center(r1) - self_potential_at_center(r2); exactly 0.
  double analytic_difference;
  McEstimate i1;
  McEstimate i2;
  McEstimate i3;
  double mc_sum;       // i1 + i2 + i3
  double mc_sum_error; // combined standard error (i1, i2 fully correlated)
  bool passed;         // analytic exact and |mc_sum| < 3 mc_sum_error
};

/// Checks that the deterministic self-gravity terms cancel in the variance.
///
/// I1 and I2 are sampled in the shifted variables R' = r_c - r', R'' = r_c - r''
/// from the same stream, so they agree bit for bit. I3 pairs a draw around r1
/// with an independent draw around r2 in absolute coordinates.
SnCancellationReport sn_cancellation_check(double c1, double separation,
                                           std::uint64_t n, std::uint64_t seed,
                                           const Parallelism& par = {});

struct ErfIdentityCheck {
  double lhs;       // quadrature
  double rhs;       // sqrt(pi) erf(R / sqrt(2 C1))
  double residual;  // |lhs - rhs|
};

/// int_0^inf erf(x) [exp(-(x - s)^2) - exp(-(x + s)^2)] dx, s = R/sqrt(C1),
/// against its closed form.
ErfIdentityCheck erf_identity_check(double separation, double c1);

}  // namespace sndeco
