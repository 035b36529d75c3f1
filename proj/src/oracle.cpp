#include "sndeco/oracle.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "sndeco/errors.hpp"
#include "sndeco/packets.hpp"
#include "sndeco/quadrature.hpp"
#include "sndeco/rng.hpp"
#include "sndeco/special.hpp"
#include "sndeco/units.hpp"

namespace sndeco {
namespace {

// Stream identifiers keep the different estimators' draws disjoint.
enum Stream : std::uint32_t {
  kStreamI4 = 0x14,
  kStreamI6 = 0x16,
  kStreamSelf = 0x11,
  kStreamCross = 0x13,
};

constexpr double kCoincidenceGuard = 1e-12;

struct BlockMoments {
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t count = 0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  // Chan et al. pairwise combination.
  void merge(const BlockMoments& o) {
    if (o.count == 0) return;
    const double n = static_cast<double>(count + o.count);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.count) / n;
    m2 += o.m2 + delta * delta * static_cast<double>(count) *
                     static_cast<double>(o.count) / n;
    count += o.count;
  }
};

void require_samples(std::uint64_t n) {
  if (n < kMinOracleSamples) {
    throw DomainError("samples", "must be at least 10000");
  }
}

void require_c1(double c1) {
  if (!std::isfinite(c1) || !(c1 > 0.0)) {
    throw DomainError("c1", "must be positive");
  }
}

// Three standard normals scaled to the packet density (variance C1/2 per
// component). Uses two Philox blocks; draw slots [first, first + 2).
Eigen::Vector3d gaussian_offset(std::uint64_t seed, std::uint64_t index,
                                std::uint32_t stream, std::uint32_t first,
                                double sigma) {
  const auto [a, b] = normal_pair(seed, make_counter(index, stream, first));
  const auto [c, unused] =
      normal_pair(seed, make_counter(index, stream, first + 1));
  (void)unused;
  return sigma * Eigen::Vector3d(a, b, c);
}

// Deterministic blocked reduction: per-block moments in parallel, merged in
// block order, so the estimate does not depend on the worker count.
McEstimate blocked_mean(std::uint64_t n, std::uint64_t seed,
                        const Parallelism& par,
                        const std::function<double(std::uint64_t)>& sample) {
  const std::uint64_t n_blocks = (n + kOracleBlock - 1) / kOracleBlock;
  std::vector<BlockMoments> blocks(n_blocks);
  parallel_for(n_blocks, par, [&](std::size_t b, unsigned) {
    const std::uint64_t begin = b * kOracleBlock;
    const std::uint64_t end = std::min(n, begin + kOracleBlock);
    BlockMoments m;
    for (std::uint64_t i = begin; i < end; ++i) m.add(sample(i));
    blocks[b] = m;
  });
  BlockMoments total;
  for (const auto& b : blocks) total.merge(b);
  const double var = total.m2 / static_cast<double>(total.count - 1);
  return {total.mean, std::sqrt(var / static_cast<double>(total.count)), n,
          seed};
}

// 1/|z' - z''| for z' ~ packet at origin, z'' ~ packet at `shift`, resampling
// (next attempt slot) when the two points coincide.
double inverse_distance(std::uint64_t seed, std::uint64_t index,
                        std::uint32_t stream, double c1,
                        const Eigen::Vector3d& shift) {
  const double sigma = std::sqrt(0.5 * c1);
  const double guard = kCoincidenceGuard * std::sqrt(c1);
  for (std::uint32_t attempt = 0;; ++attempt) {
    const std::uint32_t slot = attempt * 4;
    const Eigen::Vector3d z1 = gaussian_offset(seed, index, stream, slot, sigma);
    const Eigen::Vector3d z2 =
        shift + gaussian_offset(seed, index, stream, slot + 2, sigma);
    const double dist = (z1 - z2).norm();
    if (dist >= guard) return 1.0 / dist;
  }
}

}  // namespace

double i4_spatial_closed_form(double c1) {
  return kSqrt2OverPi / std::sqrt(c1);
}

double i6_spatial_closed_form(double c1, double separation) {
  return -2.0 / separation * std::erf(separation / std::sqrt(2.0 * c1));
}

McEstimate mc_i4_spatial(double c1, std::uint64_t n, std::uint64_t seed,
                         const Parallelism& par) {
  require_c1(c1);
  require_samples(n);
  const Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  return blocked_mean(n, seed, par, [&](std::uint64_t i) {
    return inverse_distance(seed, i, kStreamI4, c1, origin);
  });
}

McEstimate mc_i6_spatial(double c1, double separation, std::uint64_t n,
                         std::uint64_t seed, const Parallelism& par) {
  require_c1(c1);
  require_samples(n);
  if (!std::isfinite(separation) || !(separation > 0.0)) {
    throw DomainError("separation", "must be positive");
  }
  const Eigen::Vector3d shift(separation, 0.0, 0.0);
  return blocked_mean(n, seed, par, [&](std::uint64_t i) {
    return -2.0 * inverse_distance(seed, i, kStreamI6, c1, shift);
  });
}

SnCancellationReport sn_cancellation_check(double c1, double separation,
                                           std::uint64_t n, std::uint64_t seed,
                                           const Parallelism& par) {
  require_c1(c1);
  require_samples(n);
  if (!std::isfinite(separation) || separation < 0.0) {
    throw DomainError("separation", "must be non-negative");
  }
  // Packets of unit mass in natural units with spreading width sqrt(C1) at
  // t = 0; the self-potential depends on C1 only.
  const auto nat = PhysicalConstants::natural();
  const Eigen::Vector3d r1(-0.5 * separation, 0.0, 0.0);
  const Eigen::Vector3d r2(0.5 * separation, 0.0, 0.0);
  const double a = std::sqrt(c1);
  const double v1 = self_potential_at_center(make_packet(r1, a, 1.0), 0.0, nat);
  const double v2 = self_potential_at_center(make_packet(r2, a, 1.0), 0.0, nat);

  const double sigma = std::sqrt(0.5 * c1);
  const double guard = kCoincidenceGuard * std::sqrt(c1);
  // 1 / (|r_c - r'| |r_c - r''|) with both draws around r_c, written in the
  // shifted variables, hence identical for either centre.
  auto self_term = [&](std::uint64_t i) {
    for (std::uint32_t attempt = 0;; ++attempt) {
      const std::uint32_t slot = attempt * 4;
      const Eigen::Vector3d d1 =
          gaussian_offset(seed, i, kStreamSelf, slot, sigma);
      const Eigen::Vector3d d2 =
          gaussian_offset(seed, i, kStreamSelf, slot + 2, sigma);
      const double n1 = d1.norm();
      const double n2 = d2.norm();
      if (n1 >= guard && n2 >= guard) return 1.0 / (n1 * n2);
    }
  };
  const auto i1 = blocked_mean(n, seed, par, self_term);
  const auto i2 = blocked_mean(n, seed, par, self_term);

  auto cross_term = [&](std::uint64_t i) {
    for (std::uint32_t attempt = 0;; ++attempt) {
      const std::uint32_t slot = attempt * 4;
      const Eigen::Vector3d p1 =
          r1 + gaussian_offset(seed, i, kStreamCross, slot, sigma);
      const Eigen::Vector3d p2 =
          r2 + gaussian_offset(seed, i, kStreamCross, slot + 2, sigma);
      const double n1 = (r1 - p1).norm();
      const double n2 = (r2 - p2).norm();
      if (n1 >= guard && n2 >= guard) return -2.0 / (n1 * n2);
    }
  };
  const auto i3 = blocked_mean(n, seed, par, cross_term);

  SnCancellationReport out{};
  out.analytic_difference = v1 - v2;
  out.i1 = i1;
  out.i2 = i2;
  out.i3 = i3;
  out.mc_sum = i1.value + i2.value + i3.value;
  const double se12 = i1.standard_error + i2.standard_error;
  out.mc_sum_error = std::hypot(se12, i3.standard_error);
  out.passed = out.analytic_difference == 0.0 &&
               std::fabs(out.mc_sum) < 3.0 * out.mc_sum_error;
  return out;
}

ErfIdentityCheck erf_identity_check(double separation, double c1) {
  require_c1(c1);
  if (!std::isfinite(separation) || separation < 0.0) {
    throw DomainError("separation", "must be non-negative");
  }
  const double s = separation / std::sqrt(c1);
  auto integrand = [s](double x) {
    return std::erf(x) *
           (std::exp(-(x - s) * (x - s)) - std::exp(-(x + s) * (x + s)));
  };
  // Gaussian bump centred at s; beyond s + 12 it is below exp(-144).
  const double upper = s + 12.0;
  const double rhs = kSqrtPi * std::erf(s / std::sqrt(2.0));
  double lhs = 0.0;
  if (s > 0.0) {
    lhs = integrate_adaptive(integrand, 0.0, s, 1e-12, 1e-15).value +
          integrate_adaptive(integrand, s, upper, 1e-12, 1e-15).value;
  }
  return {lhs, rhs, std::fabs(lhs - rhs)};
}

}  // namespace sndeco
