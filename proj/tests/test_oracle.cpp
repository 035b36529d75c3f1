#include <cmath>

#include "doctest.h"
#include "sndeco/errors.hpp"
#include "sndeco/oracle.hpp"
#include "sndeco/special.hpp"

using namespace sndeco;

TEST_SUITE("oracle") {

TEST_CASE("closed forms") {
  CHECK(i4_spatial_closed_form(1.0) == doctest::Approx(kSqrt2OverPi));
  CHECK(i4_spatial_closed_form(4.0) == doctest::Approx(kSqrt2OverPi / 2.0));
  CHECK(i6_spatial_closed_form(1.0, 1.0) == doctest::Approx(-1.3653789842741717));
  // large separation: point-charge limit -2/R
  CHECK(i6_spatial_closed_form(1.0, 100.0) == doctest::Approx(-0.02));
}

TEST_CASE("fixed seed reproduces bit for bit across worker counts") {
  const auto a = mc_i6_spatial(1.0, 1.0, 50000, 11, Parallelism{1});
  const auto b = mc_i6_spatial(1.0, 1.0, 50000, 11, Parallelism{3});
  const auto c = mc_i6_spatial(1.0, 1.0, 50000, 11, Parallelism{8});
  CHECK(a.value == b.value);
  CHECK(a.value == c.value);
  CHECK(a.standard_error == c.standard_error);
  const auto d = mc_i6_spatial(1.0, 1.0, 50000, 12, Parallelism{1});
  CHECK(a.value != d.value);
}

TEST_CASE("standard errors cover the closed form") {
  int i4_hits = 0;
  int i6_hits = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto e4 = mc_i4_spatial(1.0, kMinOracleSamples, seed);
    const auto e6 = mc_i6_spatial(0.5, 0.8, kMinOracleSamples, seed);
    if (std::abs(e4.value - i4_spatial_closed_form(1.0)) < 2.0 * e4.standard_error)
      ++i4_hits;
    if (std::abs(e6.value - i6_spatial_closed_form(0.5, 0.8)) < 2.0 * e6.standard_error)
      ++i6_hits;
  }
  CHECK(i4_hits >= 90);
  CHECK(i6_hits >= 90);
}

TEST_CASE("standard error halves when samples quadruple") {
  const auto a = mc_i4_spatial(1.0, 100000, 5);
  const auto b = mc_i4_spatial(1.0, 400000, 5);
  CHECK(a.standard_error / b.standard_error == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("self-gravity terms cancel") {
  const auto r = sn_cancellation_check(1.0, 2.0, 100000, 3);
  CHECK(r.analytic_difference == 0.0);
  CHECK(r.i1.value == r.i2.value);
  CHECK(r.i3.value == doctest::Approx(-2.0 * r.i1.value).epsilon(0.02));
  CHECK(r.passed);
}

TEST_CASE("erf identity") {
  for (const double s : {0.1, 1.0, 5.0}) {
    for (const double c1 : {0.25, 2.0}) {
      const auto e = erf_identity_check(s * std::sqrt(c1), c1);
      CHECK(e.residual < 1e-10);
    }
  }
  CHECK(erf_identity_check(0.0, 1.0).residual == 0.0);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(mc_i4_spatial(1.0, kMinOracleSamples - 1, 1), DomainError);
  CHECK_THROWS_AS(mc_i4_spatial(0.0, kMinOracleSamples, 1), DomainError);
  CHECK_THROWS_AS(mc_i6_spatial(1.0, 0.0, kMinOracleSamples, 1), DomainError);
}

}
