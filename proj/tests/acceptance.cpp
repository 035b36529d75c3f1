// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "sndeco/criteria.hpp"
#include "sndeco/errors.hpp"
#include "sndeco/noisefield.hpp"
#include "sndeco/oracle.hpp"
#include "sndeco/packets.hpp"
#include "sndeco/special.hpp"
#include "sndeco/variance.hpp"

using namespace sndeco;

namespace {

constexpr double kG = 6.67430e-11;
constexpr double kHbar = 1.054571817e-34;
constexpr std::uint64_t kSamples = 1000000;
constexpr std::uint64_t kSeed = 20240611;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

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

Verdict sn_cancellation() {
  bool ok = true;
  std::string d;
  for (const double ratio : {0.5, 1.0, 3.0}) {
    const auto r = sn_cancellation_check(1.0, ratio, kSamples, kSeed);
    ok = ok && r.passed;
    d += fmt("R=%.1f: exact=%g sum=%.3e se=%.3e; ", ratio, r.analytic_difference,
             r.mc_sum, r.mc_sum_error);
  }
  return {ok, d};
}

Verdict i4_closed_form() {
  bool ok = true;
  std::string d;
  for (const double c1 : {0.25, 1.0, 4.0}) {
    const auto e = mc_i4_spatial(c1, kSamples, kSeed);
    const double ref = i4_spatial_closed_form(c1);
    const double res = std::abs(e.value - ref);
    ok = ok && res < 3.0 * e.standard_error && res < 0.01 * ref;
    d += fmt("C1=%.2f: %.2f SE, rel %.2e; ", c1, res / e.standard_error, res / ref);
  }
  return {ok, d};
}

Verdict i6_closed_form() {
  bool ok = true;
  std::string d;
  for (const double c1 : {0.25, 1.0, 4.0}) {
    for (const double ratio : {0.5, 1.0, 3.0}) {
      const double sep = ratio * std::sqrt(c1);
      const auto e = mc_i6_spatial(c1, sep, kSamples, kSeed + 1);
      const double ref = i6_spatial_closed_form(c1, sep);
      const double res = std::abs(e.value - ref);
      ok = ok && res < 3.0 * e.standard_error && res < 0.01 * std::abs(ref);
      if (c1 == 1.0) {
        d += fmt("R/sqrtC1=%.1f: %.2f SE, rel %.2e; ", ratio,
                 res / e.standard_error, res / std::abs(ref));
      }
    }
  }
  return {ok, d + "(C1 in {0.25,1,4})"};
}

Verdict erf_identity() {
  double worst = 0.0;
  for (const double c1 : {0.25, 1.0, 4.0}) {
    for (const double ratio : {0.1, 1.0, 5.0}) {
      worst = std::max(worst, erf_identity_check(ratio * std::sqrt(c1), c1).residual);
    }
  }
  return {worst < 1e-10, fmt("max residual %.3e", worst)};
}

Verdict zero_separation() {
  bool ok = true;
  std::string d;
  for (const double tau : {0.1, 1.0, 1e6}) {
    const DimensionlessParams p{1.0, 1e-8, tau};
    const double v = phase_variance_total(p).value;
    const double r = v / i7(p);
    ok = ok && r < 1e-12;
    d += fmt("tau=%g: ratio %.2e; ", tau, r);
  }
  return {ok, d};
}

Verdict short_time() {
  const double mu = 1e4;
  const double m = 1e-16;
  const double a = mu * kHbar * kHbar / (kG * m * m * m);
  const auto p = make_params(m, a, a, 1.0);
  const auto root = damping_time(p);
  const double closed = damping_time_short(p, Threshold{});
  const double unit = time_unit(m, a);
  const double rel = std::abs(root.time - closed) / closed;
  const auto d = nondimensionalize(p);
  return {root.decoheres && root.time <= 0.01 * unit && rel < 0.05,
          fmt("mu=%.4g rho=%g: T/(ma^2/hbar)=%.3e, rel diff %.3e", d.mu, d.rho,
              root.time / unit, rel)};
}

Verdict macro_scaling() {
  const double m = 1e-15;
  const double a0 = 1e5 * kHbar * kHbar / (kG * m * m * m);
  std::vector<double> x, y;
  for (int i = 0; i <= 8; ++i) {
    const double a = a0 * std::pow(10.0, i / 8.0);
    x.push_back(std::log(a));
    y.push_back(std::log(critical_length(m, a).full));
  }
  const double s = slope(x, y);
  return {std::abs(s - 0.75) <= 0.02,
          fmt("mu in [1e5, 1e6]: exponent %.5f", s)};
}

Verdict micro_regime() {
  // mu <= 0.01, rho >> 1. The target is T ~ hbar a / (G m^2), i.e. tau = 1/mu.
  bool ok = true;
  std::string d;
  for (const double mu : {0.01, 0.001}) {
    for (const double rho : {1e2, 1e4}) {
      const double m = 1e-20;
      const double a = mu * kHbar * kHbar / (kG * m * m * m);
      const auto p = make_params(m, a, rho * a, 1.0);
      const auto t = damping_time(p);
      const double target = kHbar * a / (kG * m * m);
      const double ratio = t.time / target;
      const bool hit = t.decoheres && ratio < 3.0 && ratio > 1.0 / 3.0;
      ok = ok && hit;
      const double limit =
          phase_variance_total({mu, rho, 1e300}).value;
      if (t.decoheres) {
        d += fmt("mu=%g rho=%g: T/target=%.3g; ", mu, rho, ratio);
      } else {
        d += fmt("mu=%g rho=%g: no root below the %.0e s cap (target %.2e s), "
                 "sup DeltaPhi^2=%.3g; ",
                 mu, rho, RootOptions{}.time_cap, target, limit);
      }
    }
  }
  return {ok, d};
}

Verdict critical_mass_order() {
  const double mc = critical_mass(1000.0);
  return {mc >= 1e-18 && mc <= 1e-16, fmt("m_c = %.4e kg", mc)};
}

Verdict boundary_identity() {
  double worst = 0.0;
  for (const double m : {1e-27, 1e-20, 1e-17, 1e-10}) {
    const double a = kHbar * kHbar / (kG * m * m * m);
    worst = std::max(worst, std::abs(critical_length_macro(m, a) / a - 1.0));
    worst = std::max(worst, std::abs(critical_length_micro(m, a) / a - 1.0));
  }
  return {worst < 1e-12, fmt("max relative deviation %.2e", worst)};
}

Verdict noise_covariance() {
  const auto grid = make_field_grid(64, 64.0, 0.5, 1, kSeed);
  std::vector<double> seps;
  for (int c = 4; c <= 16; ++c) seps.push_back(c * grid.spacing());
  const auto rows = measured_covariance(grid, 2000, seps);
  bool ok = true;
  double worst = 0.0;
  for (const auto& r : rows) {
    const double rel = std::abs(r.estimate - r.target) / r.target;
    worst = std::max(worst, rel);
    ok = ok && rel < 0.05;
  }
  return {ok, fmt("r in [4dx, L/4], 64^3, 2000 realisations: max rel dev %.4f "
                  "(r=4dx: %.4f +- %.4f of %.4f)",
                  worst, rows.front().estimate, rows.front().standard_error,
                  rows.front().target)};
}

Verdict end_to_end() {
  bool ok = true;
  std::string d;
  for (const auto& [tau, steps] : {std::pair{0.1, 8}, std::pair{3.0, 32}}) {
    const DimensionlessParams p{1.0, 1.0, tau};
    const auto grid = auto_field_grid(p, 64, steps, kSeed);
    const auto s = simulate_phase_variance(p, grid, 512);
    const double analytic = phase_variance_total(p).value;
    const double tol = std::max(0.1 * analytic, 3.0 * s.standard_error_of_variance);
    const double diff = std::abs(s.variance - analytic);
    ok = ok && diff <= tol;
    d += fmt("tau=%g: sim %.4e +- %.1e vs %.4e (rel %.3f); ", tau, s.variance,
             s.standard_error_of_variance, analytic, diff / analytic);
  }
  return {ok, d + "512 members, 64^3"};
}

Verdict invariants() {
  std::vector<std::string> failed;
  // monotone in tau_max and rho
  bool mono = true;
  for (const double rho : {1e-3, 0.3, 3.0, 300.0}) {
    double prev = 0.0;
    for (double tau = 1e-4; tau < 1e8; tau *= 2.0) {
      const double v = phase_variance_total({1.0, rho, tau}).value;
      mono = mono && v >= prev;
      prev = v;
    }
  }
  for (const double tau : {1e-3, 1.0, 1e5}) {
    double prev = 0.0;
    for (double rho = 1e-8; rho < 1e8; rho *= 2.0) {
      const double v = phase_variance_total({1.0, rho, tau}).value;
      mono = mono && v >= prev;
      prev = v;
    }
  }
  if (!mono) failed.push_back("monotonicity");
  // linear in mu
  bool lin = true;
  for (const double k : {3.0, 1e-7, 1e11}) {
    for (const double rho : {1e-7, 0.5, 40.0}) {
      const double base = phase_variance_total({1.0, rho, 2.0}).value;
      const double v = phase_variance_total({k, rho, 2.0}).value;
      lin = lin && std::abs(v - k * base) <= 4e-16 * v;
    }
  }
  if (!lin) failed.push_back("linearity");
  // normalisation
  bool norm = true;
  const auto nat = PhysicalConstants::natural();
  for (const double t : {0.0, 2.0}) {
    const auto pk = make_packet({0.5, 0.0, -0.5}, 1.0, 1.0);
    const CubicGrid grid{128, 12.0 * std::sqrt(spreading_width(pk, t, nat)) + 1.0};
    double sum = 0.0;
    for (const double v : density_on_grid(pk, t, grid, nat)) sum += v;
    norm = norm && std::abs(sum * grid.cell_volume() - 1.0) < 1e-6;
  }
  if (!norm) failed.push_back("normalisation");
  // SE ~ n^-1/2
  const auto a = mc_i4_spatial(1.0, 100000, kSeed);
  const auto b = mc_i4_spatial(1.0, 400000, kSeed);
  const double se_ratio = a.standard_error / b.standard_error;
  if (std::abs(se_ratio - 2.0) > 0.2) failed.push_back("SE scaling");
  // determinism across worker counts
  const auto o1 = mc_i6_spatial(1.0, 1.0, 100000, kSeed, Parallelism{1});
  const auto o4 = mc_i6_spatial(1.0, 1.0, 100000, kSeed, Parallelism{4});
  const DimensionlessParams p{1.0, 1.0, 0.5};
  const auto grid = auto_field_grid(p, 32, 2, kSeed);
  SimulationOptions s1, s4;
  s1.parallelism.workers = 1;
  s4.parallelism.workers = 4;
  const bool det = o1.value == o4.value &&
                   o1.standard_error == o4.standard_error &&
                   simulate_phase_differences(p, grid, kMinMembers, s1) ==
                       simulate_phase_differences(p, grid, kMinMembers, s4);
  if (!det) failed.push_back("determinism");
  std::string d = fmt("SE ratio n vs 4n %.3f; ", se_ratio);
  d += failed.empty() ? "all properties hold" : "failed:";
  for (const auto& f : failed) d += " " + f;
  return {failed.empty(), d};
}

}  // namespace

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"SN cancellation", sn_cancellation},
      {"I4s closed form", i4_closed_form},
      {"I6s closed form", i6_closed_form},
      {"erf identity", erf_identity},
      {"zero-separation limit", zero_separation},
      {"short-time closed form", short_time},
      {"macro scaling law", macro_scaling},
      {"micro regime", micro_regime},
      {"critical mass", critical_mass_order},
      {"boundary identity", boundary_identity},
      {"noise covariance", noise_covariance},
      {"end-to-end stochastic reproduction", end_to_end},
      {"invariant suite", invariants},
  };
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int k = 1; k < argc; ++k) {
    const long n = std::strtol(argv[k], nullptr, 10);
    if (n >= 1 && n <= static_cast<long>(criteria.size())) selected[n - 1] = true;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("%s %2zu %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
