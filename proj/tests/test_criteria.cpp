#include <cmath>
#include <vector>

#include "doctest.h"
#include "sndeco/criteria.hpp"
#include "sndeco/errors.hpp"
#include "sndeco/special.hpp"
#include "sndeco/variance.hpp"

using namespace sndeco;

namespace {

constexpr double kG = 6.67430e-11;
constexpr double kHbar = 1.054571817e-34;

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_SUITE("criteria") {

TEST_CASE("damping time is a root of the threshold equation") {
  const auto p = make_params(1e-16, 1e-7, 3e-7, 1.0);
  const auto t = damping_time(p);
  REQUIRE(t.decoheres);
  auto q = p;
  q.horizon = t.time;
  CHECK(phase_variance_total(nondimensionalize(q)).value ==
        doctest::Approx(kPi * kPi).epsilon(1e-8));
}

TEST_CASE("zero separation returns the cap sentinel") {
  const auto t = damping_time(make_params(1e-16, 1e-7, 0.0, 1.0));
  CHECK_FALSE(t.decoheres);
  CHECK(t.time == RootOptions{}.time_cap);
  CHECK(std::isinf(damping_time_short(make_params(1e-16, 1e-7, 0.0, 1.0))));
}

TEST_CASE("larger threshold takes longer") {
  const auto p = make_params(1e-16, 1e-7, 3e-7, 1.0);
  const auto a = damping_time(p, Threshold{kPi * kPi});
  const auto b = damping_time(p, Threshold{2.0 * kPi * kPi});
  CHECK(b.time > a.time);
}

TEST_CASE("short-time closed form") {
  // mu = 1e4, rho = 1 reaches the threshold at tau ~ 4e-3
  const double tau = *damping_tau(1e4, 1.0, Threshold{}, 1e18);
  CHECK(tau < 0.01);
  const double b = kSqrt2OverPi - std::erf(1.0 / std::sqrt(2.0));
  CHECK(tau == doctest::Approx(kPi * kPi / (2.0 * 1e4 * b)).epsilon(0.05));

  const double m = 1e-16;
  const double a = 1e4 * kHbar * kHbar / (kG * m * m * m);
  const auto p = make_params(m, a, a, 1.0);
  const double t_root = damping_time(p).time;
  CHECK(t_root == doctest::Approx(damping_time_short(p, Threshold{})).epsilon(0.05));
  CHECK(damping_time_short(p, Threshold{2.0}) == doctest::Approx(damping_time_short(p)));
}

TEST_CASE("closed form limits") {
  const double m = 1e-17, a = 1e-7;
  const auto far = make_params(m, a, 1e6 * a, 1.0);
  CHECK(damping_time_short(far) ==
        doctest::Approx(kHbar * a / (kG * m * m) * std::sqrt(kPi / 2.0)).epsilon(1e-5));
  const double t1 = damping_time_short(make_params(m, a, 1e-4 * a, 1.0));
  const double t2 = damping_time_short(make_params(m, a, 2e-4 * a, 1.0));
  CHECK(t1 / t2 == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("damping time decreases with mass") {
  double prev = HUGE_VAL;
  for (double m = 1e-16; m < 1e-13; m *= 2.0) {
    const auto t = damping_time(make_params(m, 1e-7, 5e-7, 1.0));
    REQUIRE(t.decoheres);
    CHECK(t.time < prev);
    prev = t.time;
  }
}

TEST_CASE("single sign change of the threshold equation") {
  for (const double rho : {0.5, 2.0, 20.0}) {
    int changes = 0;
    double prev = -kPi * kPi;
    for (double tau = 1e-12; tau < 1e18; tau *= 1.5) {
      const double g = phase_variance_total({1e3, rho, tau}).value - kPi * kPi;
      if ((g > 0.0) != (prev > 0.0)) ++changes;
      prev = g;
    }
    CHECK(changes == 1);
  }
}

TEST_CASE("asymptotes meet at mu = 1") {
  const double m = 1e-17;
  const double a = kHbar * kHbar / (kG * m * m * m);
  CHECK(critical_length_macro(m, a) == doctest::Approx(a).epsilon(1e-12));
  CHECK(critical_length_micro(m, a) == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("macro scaling of the full critical length") {
  const double m = 1e-15;
  const double a0 = 1e5 * kHbar * kHbar / (kG * m * m * m);
  std::vector<double> x, y;
  for (int i = 0; i <= 4; ++i) {
    const double a = a0 * std::pow(10.0, i / 4.0);
    const auto lc = critical_length(m, a);
    x.push_back(std::log(a));
    y.push_back(std::log(lc.full));
    CHECK(lc.asymptote_method == Method::MacroAsymptotic);
  }
  CHECK(slope(x, y) == doctest::Approx(0.75).epsilon(0.02 / 0.75));
}

TEST_CASE("micro asymptote scales as a^(1/2)") {
  const double m = 1e-20;
  const double r = critical_length_micro(m, 4e-9) / critical_length_micro(m, 1e-9);
  CHECK(r == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("unbracketable critical length reports the scanned interval") {
  const double m = 1e-20, a = 1e-3;  // mu ~ 6e-6
  try {
    critical_length(m, a);
    FAIL("expected a bracket error");
  } catch (const BracketError& e) {
    CHECK(e.scanned_hi() > e.scanned_lo());
    CHECK(e.scanned_hi() > a);
  }
}

TEST_CASE("critical mass") {
  const double mc = critical_mass(1000.0);
  CHECK(mc > 1e-18);
  CHECK(mc < 1e-16);
  CHECK(critical_mass(1e4) / mc == doctest::Approx(std::pow(10.0, 0.1)).epsilon(1e-12));
  CHECK_THROWS_AS(critical_mass(0.0), DomainError);
}

TEST_CASE("critical mass is self-consistent with the asymptotic length") {
  const double rho_d = 1000.0;
  const double mc = critical_mass(rho_d);
  const double a = std::cbrt(3.0 * mc / (4.0 * kPi * rho_d));
  const auto lc = critical_length_micro(mc, a);
  CHECK(lc / a < 3.0);
  CHECK(lc / a > 1.0 / 3.0);
}

TEST_CASE("classification") {
  CHECK(classify(1.0, 1e-2, 1000.0).regime == Regime::Classical);
  CHECK(classify(1e-27, 1e-9, 1000.0).regime == Regime::Quantum);
  const double mc = critical_mass(1000.0);
  const auto b = classify(mc, std::cbrt(mc / 1000.0), 1000.0);
  CHECK(b.regime == Regime::Boundary);
  CHECK(b.length_ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("heavier never turns quantum") {
  for (double m = 1e-25; m < 1e-5; m *= 10.0) {
    for (const double a : {1e-9, 1e-7, 1e-5}) {
      const auto before = classify(m, a, 1000.0).regime;
      const auto after = classify(1e6 * m, a, 1000.0).regime;
      if (before == Regime::Classical) CHECK(after == Regime::Classical);
    }
  }
}

TEST_CASE("assess falls back to the asymptote when unbracketable") {
  const auto r = assess(make_params(1e-20, 1e-3, 1e-2, 1.0), 1000.0);
  CHECK_FALSE(r.decoheres);
  CHECK(r.method == Method::MicroAsymptotic);
  CHECK(r.critical_length > 0.0);
}

// The full root lies between the two asymptotes for 0.1 < mu < 10, or
// within a factor 3 of the nearer one.
TEST_CASE("mid-mu critical length brackets the asymptotes") {
  for (const double mu : {0.2, 1.0, 5.0}) {
    double ell = 0.0;
    try {
      ell = critical_length_scaled(mu, Threshold{}, 1e30);
    } catch (const BracketError&) {
      ell = HUGE_VAL;
    }
    const double macro = std::pow(mu, -0.25);
    const double micro = std::pow(mu, -0.5);
    const double lo = std::min(macro, micro);
    const double hi = std::max(macro, micro);
    const double nearer = ell > hi ? hi : lo;
    CAPTURE(mu);
    CAPTURE(ell);
    CHECK(((ell >= lo && ell <= hi) || (ell / nearer < 3.0 && nearer / ell < 3.0)));
  }
}

}
