#pragma once

#include <optional>

#include "sndeco/special.hpp"
#include "sndeco/units.hpp"

namespace sndeco {

/// Decoherence sets in once DeltaPhi^2 reaches this value (order pi^2).
struct Threshold {
  double variance_threshold = kPi * kPi;
};

struct RootOptions {
  double time_cap = 1e18;     // s, largest damping time searched
  double rel_tol = 1e-9;      // relative root tolerance
};

struct DampingTime {
  double time;      // s; equals the cap when !decoheres
  bool decoheres;   // threshold reached below the cap
};

/// Dimensionless damping time: tau with DeltaPhi^2(mu, rho, tau) = threshold,
/// or nullopt when the threshold is not reached for tau <= tau_cap.
std::optional<double> damping_tau(double mu, double rho, const Threshold& th,
                                  double tau_cap, double rel_tol = 1e-9);

/// Root of DeltaPhi^2(T) = threshold on the full quadrature.
DampingTime damping_time(const PacketPair& p, const Threshold& th = {},
                         const RootOptions& opts = {},
                         const PhysicalConstants& c = PhysicalConstants{});

/// Short-time closed form T = (hbar / G m^2) [sqrt(2/pi)/a - erf(R/sqrt2 a)/R]^-1.
///
/// The unit constant corresponds to DeltaPhi^2 = 2 in the frozen-width limit.
/// Returns +inf for R = 0.
double damping_time_short(const PacketPair& p,
                          const PhysicalConstants& c = PhysicalConstants{});

/// Same closed form scaled to an explicit threshold: solves
/// 2 mu tau [sqrt(2/pi) - erf(rho/sqrt2)/rho] = threshold.
double damping_time_short(const PacketPair& p, const Threshold& th,
                          const PhysicalConstants& c = PhysicalConstants{});

enum class Method { FullQuadrature, MacroAsymptotic, MicroAsymptotic };
enum class Regime { Quantum, Classical, Boundary };

const char* to_string(Method m);
const char* to_string(Regime r);

/// L_c = (hbar^2 / G m^3)^{1/4} a^{3/4}, valid for mu >> 1.
double critical_length_macro(double mass, double width,
                             const PhysicalConstants& c = PhysicalConstants{});
/// L_c = (hbar^2 / G m^3)^{1/2} a^{1/2}, valid for mu << 1.
double critical_length_micro(double mass, double width,
                             const PhysicalConstants& c = PhysicalConstants{});

struct CriticalLength {
  double full;        // m, root of m L^2 / hbar = T(L)
  double asymptote;   // m, the asymptotic law matching mu
  Method asymptote_method;
  double macro;       // m
  double micro;       // m
};

/// Solves t_q(L) = m L^2 / hbar = T(L) with T from the full quadrature.
/// Throws BracketError (carrying the scanned interval, in metres) when the
/// crossing lies outside the searchable range set by opts.time_cap.
CriticalLength critical_length(double mass, double width,
                               const Threshold& th = {},
                               const RootOptions& opts = {},
                               const PhysicalConstants& c = PhysicalConstants{});

/// Dimensionless critical length l = L_c / a for strength mu.
double critical_length_scaled(double mu, const Threshold& th, double tau_cap,
                              double rel_tol = 1e-9);

/// m_c = (hbar rho_d^{1/6} / G^{1/2})^{3/5}.
double critical_mass(double density,
                     const PhysicalConstants& c = PhysicalConstants{});

struct Classification {
  Regime regime;
  double length_ratio;   // L_c / a from the asymptotic law
  Method method;
  double critical_mass;  // kg at the given density
};

/// Classical iff L_c < a. Boundary when |L_c/a - 1| <= band.
Classification classify(double mass, double width, double density,
                        double band = 0.1,
                        const PhysicalConstants& c = PhysicalConstants{});

struct DecoherenceResult {
  double damping_time;     // s (cap when no decoherence)
  bool decoheres;
  double critical_length;  // m
  double critical_mass;    // kg
  Regime regime;
  Method method;           // how critical_length was obtained
};

/// Everything above for one packet pair at a given material density.
DecoherenceResult assess(const PacketPair& p, double density,
                         const Threshold& th = {}, const RootOptions& opts = {},
                         const PhysicalConstants& c = PhysicalConstants{});

}  // namespace sndeco
