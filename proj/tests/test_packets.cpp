#include <cmath>

#include "doctest.h"
#include "sndeco/packets.hpp"
#include "sndeco/special.hpp"

using namespace sndeco;

TEST_SUITE("packets") {

TEST_CASE("density integrates to one on the grid") {
  const auto nat = PhysicalConstants::natural();
  for (const double t : {0.0, 1.5}) {
    const auto pk = make_packet({0.3, -0.2, 0.1}, 1.0, 1.0);
    const double c1 = spreading_width(pk, t, nat);
    const CubicGrid grid{128, 12.0 * std::sqrt(c1) + 1.0};
    const auto rho = density_on_grid(pk, t, grid, nat);
    double sum = 0.0;
    for (const double v : rho) sum += v;
    CHECK(sum * grid.cell_volume() == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("peak density and spreading") {
  const auto nat = PhysicalConstants::natural();
  const auto pk = make_packet({1.0, 2.0, 3.0}, 2.0, 0.5);
  const double c1 = spreading_width(pk, 3.0, nat);
  CHECK(c1 == doctest::Approx(4.0 * (1.0 + 9.0 / (0.25 * 16.0))));
  CHECK(density(pk, pk.center, 3.0, nat) ==
        doctest::Approx(std::pow(kPi * c1, -1.5)));
}

// Radial Simpson quadrature of G m int rho(r) / r d^3r.
TEST_CASE("self potential at the centre") {
  const auto nat = PhysicalConstants::natural();
  for (const double a : {0.5, 1.0, 3.0}) {
    const auto pk = make_packet({4.0, 0.0, 0.0}, a, 2.0);
    const double c1 = spreading_width(pk, 0.7, nat);
    const int n = 20000;
    const double hi = 12.0 * std::sqrt(c1);
    const double h = hi / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double r = i * h;
      const double f = 4.0 * kPi * r * std::pow(kPi * c1, -1.5) *
                       std::exp(-r * r / c1);
      s += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    const double oracle = pk.mass * s * h / 3.0;
    CHECK(self_potential_at_center(pk, 0.7, nat) ==
          doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("self potential does not depend on position") {
  const auto nat = PhysicalConstants::natural();
  const auto p1 = make_packet({-5.0, 0.0, 0.0}, 1.3, 1.0);
  const auto p2 = make_packet({17.0, 3.0, -2.0}, 1.3, 1.0);
  CHECK(self_potential_at_center(p1, 2.0, nat) ==
        self_potential_at_center(p2, 2.0, nat));
}

}
