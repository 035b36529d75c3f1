#include "sndeco/criteria.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "sndeco/errors.hpp"
#include "sndeco/variance.hpp"

namespace sndeco {
namespace {

constexpr double kBracketFactor = 8.0;
constexpr double kSmallestTau = 1e-300;
constexpr double kInnerRelTol = 1e-11;

void require_threshold(const Threshold& th) {
  if (!std::isfinite(th.variance_threshold) || !(th.variance_threshold > 0.0)) {
    throw DomainError("threshold", "must be positive");
  }
}

template <class F>
double solve_bracketed(F&& f, double lo, double hi, double f_lo, double f_hi,
                       double rel_tol) {
  std::uintmax_t max_iter = 300;
  auto tol = [rel_tol](double a, double b) {
    return std::fabs(b - a) <= rel_tol * std::fmin(std::fabs(a), std::fabs(b));
  };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi,
                                                        tol, max_iter);
  return 0.5 * (a + b);
}

// Length of gravitational self-localisation, hbar^2 / (G m^3).
double gravitational_length(double mass, const PhysicalConstants& c) {
  const double hbar_over_m = c.hbar / mass;
  return hbar_over_m * hbar_over_m / (c.G * mass);
}

}  // namespace

std::optional<double> damping_tau(double mu, double rho, const Threshold& th,
                                  double tau_cap, double rel_tol) {
  require_threshold(th);
  if (!(tau_cap > 0.0)) throw DomainError("time_cap", "must be positive");
  if (rho == 0.0) return std::nullopt;
  auto f = [&](double tau) {
    return phase_variance_total({mu, rho, tau}).value - th.variance_threshold;
  };
  const double f_cap = f(tau_cap);
  if (f_cap < 0.0) return std::nullopt;

  double lo = std::fmin(1.0, tau_cap);
  double f_lo = f(lo);
  double hi = lo;
  double f_hi = f_lo;
  if (f_lo >= 0.0) {
    while (f_lo >= 0.0) {
      hi = lo;
      f_hi = f_lo;
      lo /= kBracketFactor;
      if (lo < kSmallestTau) {
        throw BracketError("damping time below representable range", lo, hi);
      }
      f_lo = f(lo);
    }
  } else {
    while (f_hi < 0.0) {
      lo = hi;
      f_lo = f_hi;
      hi *= kBracketFactor;
      if (hi >= tau_cap) {
        hi = tau_cap;
        f_hi = f_cap;
        break;
      }
      f_hi = f(hi);
    }
  }
  if (f_hi == 0.0) return hi;
  return solve_bracketed(f, lo, hi, f_lo, f_hi, rel_tol);
}

DampingTime damping_time(const PacketPair& p, const Threshold& th,
                         const RootOptions& opts, const PhysicalConstants& c) {
  const auto d = nondimensionalize(p, c);
  const double unit = time_unit(p.mass, p.width, c);
  const auto tau = damping_tau(d.mu, d.rho, th, opts.time_cap / unit,
                               opts.rel_tol);
  if (!tau) return {opts.time_cap, false};
  return {*tau * unit, true};
}

double damping_time_short(const PacketPair& p, const PhysicalConstants& c) {
  // threshold 2 reproduces the unit constant
  return damping_time_short(p, Threshold{2.0}, c);
}

double damping_time_short(const PacketPair& p, const Threshold& th,
                          const PhysicalConstants& c) {
  require_threshold(th);
  const auto d = nondimensionalize(p, c);
  if (d.rho == 0.0) return std::numeric_limits<double>::infinity();
  // T = threshold / (2 mu B(rho)) in units of m a^2 / hbar, where
  // B = sqrt(2/pi) - erf(rho/sqrt2)/rho = sqrt(2/pi) h(rho/sqrt2)
  const double bracket = kSqrt2OverPi * erf_deficit(d.rho / std::sqrt(2.0));
  const double tau = th.variance_threshold / (2.0 * d.mu * bracket);
  return tau * time_unit(p.mass, p.width, c);
}

const char* to_string(Method m) {
  switch (m) {
    case Method::FullQuadrature: return "full_quadrature";
    case Method::MacroAsymptotic: return "macro_asymptotic";
    case Method::MicroAsymptotic: return "micro_asymptotic";
  }
  return "unknown";
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Quantum: return "quantum";
    case Regime::Classical: return "classical";
    case Regime::Boundary: return "boundary";
  }
  return "unknown";
}

double critical_length_macro(double mass, double width,
                             const PhysicalConstants& c) {
  make_params(mass, width, 0.0, 1.0);
  return std::pow(gravitational_length(mass, c), 0.25) * std::pow(width, 0.75);
}

double critical_length_micro(double mass, double width,
                             const PhysicalConstants& c) {
  make_params(mass, width, 0.0, 1.0);
  return std::sqrt(gravitational_length(mass, c)) * std::sqrt(width);
}

double critical_length_scaled(double mu, const Threshold& th, double tau_cap,
                              double rel_tol) {
  const double l_cap = std::sqrt(tau_cap);
  const double log_cap = std::log(tau_cap);
  // g(log l) = log T(l) - log t_q(l); decreasing. Where the threshold is
  // never reached T > tau_cap, represented by the positive surrogate below.
  auto g = [&](double log_l) {
    const double l = std::exp(log_l);
    const auto tau = damping_tau(mu, l, th, tau_cap, kInnerRelTol);
    const double log_t = tau ? std::log(*tau) : log_cap + 1.0;
    return log_t - 2.0 * log_l;
  };

  const double start = std::fmin(mu >= 1.0 ? std::pow(mu, -0.25)
                                            : std::pow(mu, -0.5),
                                 l_cap);
  const double step = std::log(2.0);
  double lo = std::log(start);
  double g_lo = g(lo);
  double hi = lo;
  double g_hi = g_lo;
  const double log_l_cap = std::log(l_cap);
  const double log_l_min = std::log(1e-150);
  if (g_lo > 0.0) {
    while (g_hi > 0.0) {
      lo = hi;
      g_lo = g_hi;
      hi += step;
      if (hi > log_l_cap) {
        throw BracketError(
            "critical length beyond the time cap (t_q = m L^2 / hbar)",
            std::exp(log_l_min), l_cap);
      }
      g_hi = g(hi);
    }
  } else {
    while (g_lo <= 0.0) {
      hi = lo;
      g_hi = g_lo;
      lo -= step;
      if (lo < log_l_min) {
        throw BracketError("critical length below representable range",
                           std::exp(lo), l_cap);
      }
      g_lo = g(lo);
    }
  }
  if (g_hi == 0.0) return std::exp(hi);
  // rel_tol on l maps to an absolute tolerance on log l
  std::uintmax_t max_iter = 300;
  auto tol = [rel_tol](double a, double b) {
    return std::fabs(b - a) <= rel_tol;
  };
  const auto [a, b] =
      boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, tol, max_iter);
  return std::exp(0.5 * (a + b));
}

CriticalLength critical_length(double mass, double width, const Threshold& th,
                               const RootOptions& opts,
                               const PhysicalConstants& c) {
  const auto d = nondimensionalize({mass, width, 0.0, opts.time_cap}, c);
  const double macro = critical_length_macro(mass, width, c);
  const double micro = critical_length_micro(mass, width, c);
  const bool is_macro = d.mu >= 1.0;
  CriticalLength out{};
  out.macro = macro;
  out.micro = micro;
  out.asymptote = is_macro ? macro : micro;
  out.asymptote_method =
      is_macro ? Method::MacroAsymptotic : Method::MicroAsymptotic;
  try {
    out.full = width * critical_length_scaled(d.mu, th, d.tau_max,
                                              opts.rel_tol);
  } catch (const BracketError& e) {
    throw BracketError(e.what(), e.scanned_lo() * width,
                       e.scanned_hi() * width);
  }
  return out;
}

double critical_mass(double density, const PhysicalConstants& c) {
  if (!std::isfinite(density) || !(density > 0.0)) {
    throw DomainError("density", "must be positive");
  }
  validate(c);
  return std::pow(c.hbar * std::pow(density, 1.0 / 6.0) / std::sqrt(c.G), 0.6);
}

Classification classify(double mass, double width, double density,
                        double band, const PhysicalConstants& c) {
  if (!std::isfinite(band) || band < 0.0) {
    throw DomainError("band", "must be non-negative");
  }
  const double m_c = critical_mass(density, c);
  const auto d = nondimensionalize({mass, width, 0.0, 1.0}, c);
  const bool is_macro = d.mu >= 1.0;
  const double lc = is_macro ? critical_length_macro(mass, width, c)
                             : critical_length_micro(mass, width, c);
  const double ratio = lc / width;
  Regime regime = Regime::Quantum;
  if (std::fabs(ratio - 1.0) <= band) {
    regime = Regime::Boundary;
  } else if (ratio < 1.0) {
    regime = Regime::Classical;
  }
  return {regime, ratio,
          is_macro ? Method::MacroAsymptotic : Method::MicroAsymptotic, m_c};
}

DecoherenceResult assess(const PacketPair& p, double density,
                         const Threshold& th, const RootOptions& opts,
                         const PhysicalConstants& c) {
  const auto damping = damping_time(p, th, opts, c);
  const auto cls = classify(p.mass, p.width, density, 0.1, c);
  DecoherenceResult out{};
  out.damping_time = damping.time;
  out.decoheres = damping.decoheres;
  out.critical_mass = cls.critical_mass;
  out.regime = cls.regime;
  try {
    out.critical_length = critical_length(p.mass, p.width, th, opts, c).full;
    out.method = Method::FullQuadrature;
  } catch (const BracketError&) {
    out.critical_length = cls.length_ratio * p.width;
    out.method = cls.method;
  }
  return out;
}

}  // namespace sndeco
