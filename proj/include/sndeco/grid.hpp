#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace sndeco {

/// Periodic cubic grid of n^3 nodes covering [-L/2, L/2)^3. Node (i, j, k)
/// sits at ((i - n/2) dx, (j - n/2) dx, (k - n/2) dx), stored row-major with
/// k fastest.
struct CubicGrid {
  int n;
  double length;

  double spacing() const { return length / n; }
  double cell_volume() const {
    const double dx = spacing();
    return dx * dx * dx;
  }
  std::size_t size() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  double coordinate(int i) const { return (i - n / 2) * spacing(); }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  Eigen::Vector3d node(int i, int j, int k) const {
    return {coordinate(i), coordinate(j), coordinate(k)};
  }
};

}  // namespace sndeco
