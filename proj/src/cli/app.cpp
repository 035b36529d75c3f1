#include "sndeco/cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>

#include "sndeco/criteria.hpp"
#include "sndeco/errors.hpp"
#include "sndeco/noisefield.hpp"
#include "sndeco/oracle.hpp"
#include "sndeco/parallel.hpp"
#include "sndeco/variance.hpp"

namespace sndeco::cli {
namespace {

using I = std::int64_t;

void provenance(ResultRecord& r, const std::string& ts) {
  r.add("version", std::string(kVersion)).add("timestamp", ts);
}

void provenance(ResultRecord& r, std::uint64_t seed, const std::string& ts) {
  r.add("version", std::string(kVersion))
      .add("seed", static_cast<I>(seed))
      .add("timestamp", ts);
}

DimensionlessParams scaled_of(const RunConfig& cfg) {
  return cfg.scaled ? *cfg.scaled : nondimensionalize(*cfg.packets);
}

void echo_si(ResultRecord& r, const PacketPair& p, bool horizon) {
  r.add("mass_kg", p.mass).add("width_m", p.width).add("separation_m",
                                                       p.separation);
  if (horizon) r.add("horizon_s", p.horizon);
}

Outcome run_variance(const RunConfig& cfg, const std::string& ts) {
  const auto d = scaled_of(cfg);
  const auto v = phase_variance(d);
  ResultRecord r;
  if (cfg.packets) echo_si(r, *cfg.packets, true);
  r.add("mu", d.mu).add("rho", d.rho).add("tau_max", d.tau_max);
  r.add("i7", v.i7).add("i8", v.i8).add("delta_phi2", v.total);
  r.add("quadrature_error", v.quadrature_error_estimate);
  r.add("delta_phi2_frozen_width", phase_variance_frozen_width(d));
  provenance(r, ts);
  return {{r}, true};
}

Outcome run_criteria(const RunConfig& cfg, const std::string& ts) {
  const Threshold th{cfg.threshold};
  ResultRecord r;
  if (cfg.packets) {
    const PacketPair& p = *cfg.packets;
    const RootOptions opts{cfg.time_cap, RootOptions{}.rel_tol};
    const auto d = nondimensionalize(p);
    const auto res = assess(p, cfg.density, th, opts);
    const auto cls = classify(p.mass, p.width, cfg.density, cfg.band);
    echo_si(r, p, false);
    r.add("density_kg_m3", cfg.density).add("threshold", cfg.threshold);
    r.add("mu", d.mu).add("rho", d.rho);
    r.add("damping_time_s", res.damping_time).add("decoheres", res.decoheres);
    r.add("damping_time_short_s", damping_time_short(p, th));
    r.add("critical_length_m", res.critical_length);
    r.add("critical_length_method", std::string(to_string(res.method)));
    r.add("critical_length_macro_m", critical_length_macro(p.mass, p.width));
    r.add("critical_length_micro_m", critical_length_micro(p.mass, p.width));
    r.add("length_ratio", cls.length_ratio);
    r.add("critical_mass_kg", cls.critical_mass);
    r.add("regime", std::string(to_string(cls.regime)));
  } else if (cfg.scaled) {
    const auto& d = *cfg.scaled;
    const auto tau = damping_tau(d.mu, d.rho, th, cfg.time_cap);
    const double b = kSqrt2OverPi * erf_deficit(d.rho / std::sqrt(2.0));
    double ell = 0.0;
    Method method = Method::FullQuadrature;
    try {
      ell = critical_length_scaled(d.mu, th, cfg.time_cap);
    } catch (const BracketError&) {
      method = d.mu >= 1.0 ? Method::MacroAsymptotic : Method::MicroAsymptotic;
      ell = d.mu >= 1.0 ? std::pow(d.mu, -0.25) : std::pow(d.mu, -0.5);
    }
    r.add("mu", d.mu).add("rho", d.rho).add("threshold", cfg.threshold);
    r.add("damping_tau", tau.value_or(cfg.time_cap));
    r.add("decoheres", tau.has_value());
    r.add("damping_tau_short", cfg.threshold / (2.0 * d.mu * b));
    r.add("critical_length_scaled", ell);
    r.add("critical_length_method", std::string(to_string(method)));
    r.add("critical_length_macro_scaled", std::pow(d.mu, -0.25));
    r.add("critical_length_micro_scaled", std::pow(d.mu, -0.5));
  } else {
    const double mc = critical_mass(cfg.density);
    r.add("density_kg_m3", cfg.density).add("critical_mass_kg", mc);
    r.add("critical_width_m", std::cbrt(mc / cfg.density));
  }
  provenance(r, ts);
  return {{r}, true};
}

Outcome run_sweep(const RunConfig& cfg, const std::string& ts) {
  struct Point {
    PacketPair p;
    DimensionlessParams d;
    double variance;
    DecoherenceResult res;
  };
  std::vector<Point> points;
  for (const double m : cfg.masses) {
    for (const double a : cfg.widths) {
      for (const double sep : cfg.separations) {
        const auto p = make_params(m, a, sep, cfg.horizon);
        points.push_back({p, nondimensionalize(p), 0.0, {}});
      }
    }
  }
  const Threshold th{cfg.threshold};
  const RootOptions opts{cfg.time_cap, RootOptions{}.rel_tol};
  parallel_for(points.size(), Parallelism{cfg.threads},
               [&](std::size_t i, unsigned) {
                 auto& pt = points[i];
                 pt.variance = phase_variance_total(pt.d).value;
                 pt.res = assess(pt.p, cfg.density, th, opts);
               });
  Outcome out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    ResultRecord r;
    r.add("index", static_cast<I>(i));
    echo_si(r, pt.p, true);
    r.add("mu", pt.d.mu).add("rho", pt.d.rho).add("tau_max", pt.d.tau_max);
    r.add("delta_phi2", pt.variance);
    r.add("damping_time_s", pt.res.damping_time);
    r.add("decoheres", pt.res.decoheres);
    r.add("critical_length_m", pt.res.critical_length);
    r.add("critical_length_method", std::string(to_string(pt.res.method)));
    r.add("critical_mass_kg", pt.res.critical_mass);
    r.add("regime", std::string(to_string(pt.res.regime)));
    provenance(r, ts);
    out.records.push_back(std::move(r));
  }
  return out;
}

struct Check {
  std::string name;
  double c1;
  double separation;
  double estimate;
  double standard_error;
  double reference;
  double tolerance;
  bool passed;
  std::uint64_t samples;
};

Check mc_check(std::string name, double c1, double sep, const McEstimate& e,
               double reference) {
  const double residual = std::abs(e.value - reference);
  const double tol = 3.0 * e.standard_error;
  const bool ok = residual < tol && residual <= 0.01 * std::abs(reference);
  return {std::move(name), c1,  sep, e.value, e.standard_error,
          reference,       tol, ok,  e.n_samples};
}

Outcome run_oracle(const RunConfig& cfg, const std::string& ts) {
  const Parallelism par{cfg.threads};
  const std::uint64_t n = cfg.samples;
  std::vector<Check> checks;
  for (const double c1 : {0.25, 1.0, 4.0}) {
    checks.push_back(mc_check("i4_spatial", c1, 0.0,
                              mc_i4_spatial(c1, n, cfg.seed, par),
                              i4_spatial_closed_form(c1)));
  }
  const double c1 = 1.0;
  for (const double ratio : {0.5, 1.0, 3.0}) {
    const double sep = ratio * std::sqrt(c1);
    checks.push_back(mc_check("i6_spatial", c1, sep,
                              mc_i6_spatial(c1, sep, n, cfg.seed, par),
                              i6_spatial_closed_form(c1, sep)));
  }
  for (const double ratio : {0.5, 1.0, 3.0}) {
    const double sep = ratio * std::sqrt(c1);
    const auto rep = sn_cancellation_check(c1, sep, n, cfg.seed, par);
    checks.push_back({"sn_translation", c1, sep, rep.analytic_difference, 0.0,
                      0.0, 0.0, rep.analytic_difference == 0.0, 0});
    checks.push_back({"sn_cancellation", c1, sep, rep.mc_sum,
                      rep.mc_sum_error, 0.0, 3.0 * rep.mc_sum_error,
                      std::abs(rep.mc_sum) < 3.0 * rep.mc_sum_error, n});
  }
  for (const double ratio : {0.1, 1.0, 5.0}) {
    const double sep = ratio * std::sqrt(c1);
    const auto e = erf_identity_check(sep, c1);
    checks.push_back({"erf_identity", c1, sep, e.lhs, 0.0, e.rhs, 1e-10,
                      e.residual < 1e-10, 0});
  }
  Outcome out;
  for (const auto& c : checks) {
    ResultRecord r;
    r.add("check", c.name).add("c1", c.c1).add("separation", c.separation);
    r.add("estimate", c.estimate).add("standard_error", c.standard_error);
    r.add("reference", c.reference);
    r.add("residual", std::abs(c.estimate - c.reference));
    r.add("tolerance", c.tolerance).add("passed", c.passed);
    r.add("samples", static_cast<I>(c.samples));
    provenance(r, cfg.seed, ts);
    out.passed = out.passed && c.passed;
    out.records.push_back(std::move(r));
  }
  return out;
}

Outcome run_covariance(const RunConfig& cfg, const std::string& ts) {
  const double box = cfg.box_length.value_or(64.0);
  const auto grid = make_field_grid(cfg.grid, box, cfg.dt, 1, cfg.seed);
  const double dx = grid.spacing();
  std::vector<double> seps;
  for (const int c : cfg.cells) seps.push_back(c * dx);
  const auto rows =
      measured_covariance(grid, cfg.realizations, seps, Parallelism{cfg.threads});
  Outcome out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const double rel = std::abs(row.estimate - row.target) / row.target;
    const bool in_window =
        row.separation >= 4.0 * dx - 1e-9 * dx &&
        row.separation <= box / 4.0 + 1e-9 * dx;
    const bool ok = !in_window || rel <= 0.05;
    ResultRecord r;
    r.add("separation", row.separation);
    r.add("cells", static_cast<I>(cfg.cells[i]));
    r.add("estimate", row.estimate).add("standard_error", row.standard_error);
    r.add("raw_estimate", row.raw_estimate).add("target", row.target);
    r.add("relative_error", rel);
    r.add("checked", in_window).add("passed", ok);
    r.add("grid", static_cast<I>(cfg.grid)).add("box_length", box);
    r.add("dt", cfg.dt).add("realizations", static_cast<I>(cfg.realizations));
    provenance(r, cfg.seed, ts);
    out.passed = out.passed && ok;
    out.records.push_back(std::move(r));
  }
  return out;
}

Outcome run_simulate(const RunConfig& cfg, const std::string& ts) {
  const auto d = scaled_of(cfg);
  const auto grid =
      cfg.box_length
          ? make_field_grid(cfg.grid, *cfg.box_length, d.tau_max / cfg.steps,
                            cfg.steps, cfg.seed)
          : auto_field_grid(d, cfg.grid, cfg.steps, cfg.seed);
  SimulationOptions opts;
  opts.parallelism = Parallelism{cfg.threads};
  const auto stats = simulate_phase_variance(d, grid, cfg.members, opts);
  const double analytic = phase_variance_total(d).value;
  const double tol =
      std::max(0.1 * analytic, 3.0 * stats.standard_error_of_variance);
  const double diff = std::abs(stats.variance - analytic);
  ResultRecord r;
  if (cfg.packets) echo_si(r, *cfg.packets, true);
  r.add("mu", d.mu).add("rho", d.rho).add("tau_max", d.tau_max);
  r.add("grid", static_cast<I>(grid.n)).add("box_length", grid.box_length);
  r.add("steps", static_cast<I>(grid.n_steps)).add("dt", grid.dt);
  r.add("members", static_cast<I>(cfg.members));
  r.add("mean", stats.mean).add("variance", stats.variance);
  r.add("standard_error", stats.standard_error_of_variance);
  r.add("analytic", analytic);
  r.add("relative_error", analytic > 0 ? diff / analytic : diff);
  r.add("tolerance", tol).add("passed", diff <= tol);
  provenance(r, cfg.seed, ts);
  return {{r}, diff <= tol};
}

}  // namespace

std::string run_timestamp() {
  std::time_t t = 0;
  const char* sde = std::getenv("SOURCE_DATE_EPOCH");
  if (sde != nullptr && *sde != '\0') {
    t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Outcome execute(const RunConfig& cfg) {
  const std::string ts = run_timestamp();
  switch (cfg.command) {
    case Command::variance: return run_variance(cfg, ts);
    case Command::criteria: return run_criteria(cfg, ts);
    case Command::sweep: return run_sweep(cfg, ts);
    case Command::oracle: return run_oracle(cfg, ts);
    case Command::covariance: return run_covariance(cfg, ts);
    case Command::simulate: return run_simulate(cfg, ts);
  }
  return {};
}

int run(std::span<const std::string> args, std::ostream& out,
        std::ostream& err) {
  RunConfig cfg;
  try {
    auto parsed = parse_config(args);
    if (const auto* info = std::get_if<InfoRequest>(&parsed)) {
      out << info->text;
      return kExitOk;
    }
    cfg = std::get<RunConfig>(std::move(parsed));
  } catch (const std::exception& e) {
    err << "sndeco: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const auto outcome = execute(cfg);
    emit(outcome.records, cfg.format, cfg.output, out);
    return outcome.passed ? kExitOk : kExitCheckFailed;
  } catch (const DomainError& e) {
    err << "sndeco: invalid value: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigurationError& e) {
    err << "sndeco: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BracketError& e) {
    err << "sndeco: " << e.what() << " (scanned " << e.scanned_lo() << " to "
        << e.scanned_hi() << ")\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "sndeco: " << e.what() << " (achieved tolerance "
        << e.achieved_tolerance() << ")\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "sndeco: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace sndeco::cli
