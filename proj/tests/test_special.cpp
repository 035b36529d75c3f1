#include <cmath>
#include <initializer_list>

#include "doctest.h"
#include "sndeco/special.hpp"

using namespace sndeco;

TEST_SUITE("special") {

TEST_CASE("erf deficit against the series and long double") {
  CHECK(erf_deficit(0.0) == 0.0);
  for (const double x : {1e-8, 1e-4, 0.01, 0.1}) {
    // sum_{n>=1} (-1)^{n+1} x^{2n} / (n! (2n + 1))
    double series = 0.0;
    double term = 1.0;
    for (int n = 1; n < 20; ++n) {
      term *= -x * x / n;
      series -= term / (2 * n + 1);
    }
    CHECK(erf_deficit(x) == doctest::Approx(series).epsilon(1e-14));
  }
  for (const double x : {0.3, 0.7, 1.0, 2.0, 5.0}) {
    const long double xl = x;
    const long double ref =
        1.0L - std::sqrt(std::acos(-1.0L)) * std::erf(xl) / (2.0L * xl);
    CHECK(erf_deficit(x) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
  }
  CHECK(erf_deficit(-0.7) == erf_deficit(0.7));
}

TEST_CASE("erf deficit is continuous and increasing across the branch") {
  const double below = erf_deficit(std::nextafter(0.5, 0.0));
  const double above = erf_deficit(0.5);
  CHECK(above == doctest::Approx(below).epsilon(1e-15));
  double prev = 0.0;
  for (double x = 0.01; x < 20.0; x *= 1.1) {
    const double h = erf_deficit(x);
    CHECK(h > prev);
    CHECK(h < 1.0);
    prev = h;
  }
}

TEST_CASE("gaussian integral") {
  CHECK(gaussian_integral(0.0) == 0.0);
  CHECK(gaussian_integral(40.0) == doctest::Approx(kSqrtPi / 2.0));
}

}
