#pragma once

// Counter-based random numbers: Philox4x32-10 (Salmon et al., SC'11).
//
// Every draw is a pure function of (key, counter), so a sample's random
// numbers depend only on the seed and its own index, never on which worker
// produced it or in what order.

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace sndeco {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

constexpr PhiloxKey philox_key(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed),
          static_cast<std::uint32_t>(seed >> 32)};
}

/// Uniform in (0, 1) from the top 52 of 64 random bits; never returns 0 or 1.
constexpr double uniform_open(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t{hi} << 32 | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Two independent standard normals (Box-Muller) from one Philox block.
inline std::pair<double, double> normal_pair(std::uint64_t seed,
                                             const PhiloxCounter& ctr) {
  const auto r = philox4x32_10(ctr, philox_key(seed));
  const double u1 = uniform_open(r[0], r[1]);
  const double u2 = uniform_open(r[2], r[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 6.283185307179586476925286766559 * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

/// Counter for draw `draw` of item `index` in stream `stream`.
constexpr PhiloxCounter make_counter(std::uint64_t index, std::uint32_t stream,
                                     std::uint32_t draw) {
  return {static_cast<std::uint32_t>(index),
          static_cast<std::uint32_t>(index >> 32), stream, draw};
}

}  // namespace sndeco
