#include "sndeco/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sndeco/errors.hpp"
#include "sndeco/oracle.hpp"
#include "sndeco/noisefield.hpp"

namespace sndeco::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
      s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::string json_scalar(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number()) return format_double(v.get<double>());
  throw UsageError("config key '" + key + "': unsupported value");
}

ConfigEntries parse_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("malformed JSON config: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("JSON config must be an object");
  ConfigEntries out;
  for (const auto& [key, v] : doc.items()) {
    if (v.is_array()) {
      std::string joined;
      for (const auto& x : v) {
        if (!joined.empty()) joined += ',';
        joined += json_scalar(key, x);
      }
      out.emplace_back(key, joined);
    } else {
      out.emplace_back(key, json_scalar(key, v));
    }
  }
  return out;
}

ConfigEntries parse_flat(const std::string& text) {
  ConfigEntries out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError("malformed config line " + std::to_string(lineno) +
                       ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) {
      throw UsageError("malformed config line " + std::to_string(lineno) +
                       ": empty key");
    }
    out.emplace_back(key, unquote(trim(t.substr(eq + 1))));
  }
  return out;
}

struct Raw {
  double mass = 0, width = 0, separation = 0, horizon = 0;
  double mu = 0, rho = 0, tau_max = 0;
  std::string masses, widths, separations, cells;
  double box_length = 0;
  std::string format = "csv";
  std::string config;
};

void packet_options(CLI::App* sub, Raw& raw, bool with_horizon) {
  sub->add_option("--mass,-m", raw.mass, "Packet mass m [kg]");
  sub->add_option("--width,-a", raw.width, "Initial Gaussian width a [m]");
  sub->add_option("--separation,-R", raw.separation, "Separation R [m]");
  if (with_horizon) {
    sub->add_option("--horizon,-T", raw.horizon, "Time horizon T [s]");
  }
  sub->add_option("--mu", raw.mu, "Dimensionless strength G m^3 a / hbar^2");
  sub->add_option("--rho", raw.rho, "Dimensionless separation R / a");
  if (with_horizon) {
    sub->add_option("--tau-max", raw.tau_max,
                    "Dimensionless horizon hbar T / (m a^2)");
  }
}

void criteria_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--density", cfg.density, "Material density [kg/m^3]");
  sub->add_option("--threshold", cfg.threshold,
                  "Phase variance at which decoherence sets in");
  sub->add_option("--time-cap", cfg.time_cap,
                  "Largest damping time searched [s]");
}

void common_options(CLI::App* sub, RunConfig& cfg, Raw& raw,
                    bool threaded) {
  sub->add_option("--config", raw.config,
                  "key = value or JSON file; flags override it");
  sub->add_option("--format", raw.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output,-o", cfg.output, "Output path, - for stdout");
  if (threaded) {
    sub->add_option("--threads", cfg.threads,
                    "Worker threads, 0 = hardware count")
        ->envname("SNDECO_THREADS");
  }
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw UsageError("invalid value for " + key + ": " + what);
}

const std::map<std::string, std::string>& field_labels() {
  static const std::map<std::string, std::string> labels = {
      {"mass", "mass (m)"},          {"width", "width (a)"},
      {"separation", "separation (R)"}, {"horizon", "horizon (T)"},
      {"mu", "mu"},                  {"rho", "rho"},
      {"tau_max", "tau-max"},
  };
  return labels;
}

UsageError from_domain(const DomainError& e) {
  const auto& labels = field_labels();
  const auto it = labels.find(e.field());
  const std::string label = it == labels.end() ? e.field() : it->second;
  std::string what = e.what();
  const auto colon = what.find(": ");
  if (colon != std::string::npos) what = what.substr(colon + 2);
  return UsageError("invalid value for " + label + ": " + what);
}

bool given(const CLI::App* sub, const char* name) {
  const auto* opt = sub->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

// Fills cfg.packets / cfg.scaled. `need_horizon` selects the variance-style
// full parameter set; otherwise only m, a, R (or mu, rho) are used.
void resolve_packets(const CLI::App* sub, const Raw& raw, RunConfig& cfg,
                     bool need_horizon, bool optional) {
  const bool any_si = given(sub, "--mass") || given(sub, "--width") ||
                      given(sub, "--separation") || given(sub, "--horizon");
  const bool any_dl =
      given(sub, "--mu") || given(sub, "--rho") || given(sub, "--tau-max");
  if (any_si && any_dl) {
    throw UsageError(
        "give either SI parameters (--mass --width --separation"
        " --horizon) or dimensionless ones (--mu --rho --tau-max), not both");
  }
  if (!any_si && !any_dl) {
    if (optional) return;
    throw UsageError(
        "missing parameters: give --mass --width --separation" +
        std::string(need_horizon ? " --horizon" : "") + " or --mu --rho" +
        (need_horizon ? " --tau-max" : ""));
  }
  const auto missing = [&](std::initializer_list<const char*> names) {
    for (const char* n : names) {
      if (!given(sub, n)) throw UsageError(std::string("missing ") + n);
    }
  };
  try {
    if (any_si) {
      if (need_horizon) {
        missing({"--mass", "--width", "--separation", "--horizon"});
      } else {
        missing({"--mass", "--width", "--separation"});
      }
      cfg.packets = make_params(raw.mass, raw.width, raw.separation,
                                need_horizon ? raw.horizon : 1.0);
    } else {
      if (need_horizon) {
        missing({"--mu", "--rho", "--tau-max"});
      } else {
        missing({"--mu", "--rho"});
      }
      cfg.scaled =
          make_dimensionless(raw.mu, raw.rho, need_horizon ? raw.tau_max : 1.0);
    }
  } catch (const DomainError& e) {
    throw from_domain(e);
  }
}

std::vector<int> parse_cells(const std::string& text) {
  std::vector<int> out;
  for (const double v : parse_list(text, "cells")) {
    require(v == std::floor(v) && v >= 1 && v <= 1 << 20, "cells",
            "separations are positive whole numbers of cells");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void validate_common(const RunConfig& cfg) {
  require(std::isfinite(cfg.density) && cfg.density > 0, "density",
          "must be positive");
  require(std::isfinite(cfg.threshold) && cfg.threshold > 0, "threshold",
          "must be positive");
  require(std::isfinite(cfg.time_cap) && cfg.time_cap > 0, "time-cap",
          "must be positive");
}

void validate_grid(const RunConfig& cfg) {
  require(cfg.grid >= 32 && cfg.grid <= 1024 && is_power_of_two(cfg.grid),
          "grid", "must be a power of two in [32, 1024]");
  if (cfg.box_length) {
    require(std::isfinite(*cfg.box_length) && *cfg.box_length > 0,
            "box-length", "must be positive");
  }
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::variance: return "variance";
    case Command::criteria: return "criteria";
    case Command::sweep: return "sweep";
    case Command::oracle: return "oracle";
    case Command::covariance: return "covariance";
    case Command::simulate: return "simulate";
  }
  return "?";
}

ConfigEntries parse_config_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json(text);
  return parse_flat(text);
}

ConfigEntries load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::vector<double> parse_list(const std::string& text,
                               const std::string& key) {
  const auto number = [&](const std::string& s) {
    const std::string t = trim(s);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used != 0 && used == t.size() && std::isfinite(v), key,
            "'" + t + "' is not a number");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    require(parts.size() == 3, key, "range must be lo:hi:count");
    const double lo = number(parts[0]);
    const double hi = number(parts[1]);
    const double n = number(parts[2]);
    require(lo > 0 && hi > 0, key, "log-spaced range needs positive ends");
    require(n >= 1 && n == std::floor(n) && n <= 1e6, key,
            "count must be a positive integer");
    const int count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      out.push_back(i == count - 1 ? hi
                                   : std::exp(std::log(lo) +
                                              f * (std::log(hi) - std::log(lo))));
    }
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  }
  require(!out.empty(), key, "empty list");
  return out;
}

std::variant<RunConfig, InfoRequest> parse_config(
    std::span<const std::string> args) {
  RunConfig cfg;
  Raw raw;

  CLI::App app{"Gravitational phase-noise decoherence of superposed Gaussian "
               "wavepackets",
               "sndeco"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* variance =
      app.add_subcommand("variance", "Phase variance breakdown I7, I8, total");
  auto* criteria = app.add_subcommand(
      "criteria", "Damping time, critical length, critical mass, regime");
  auto* sweep = app.add_subcommand(
      "sweep", "Grid over mass, width and separation, one row per point");
  auto* oracle =
      app.add_subcommand("oracle", "Monte Carlo and quadrature check suite");
  auto* covariance =
      app.add_subcommand("covariance", "Sampled noise-field covariance table");
  auto* simulate = app.add_subcommand(
      "simulate", "Ensemble phase variance against the analytic value");

  packet_options(variance, raw, true);
  common_options(variance, cfg, raw, false);

  packet_options(criteria, raw, false);
  criteria_options(criteria, cfg);
  criteria->add_option("--band", cfg.band,
                       "Relative half-width of the boundary regime");
  common_options(criteria, cfg, raw, false);

  sweep->add_option("--masses", raw.masses, "Masses [kg]: list or lo:hi:count")
      ->required();
  sweep->add_option("--widths", raw.widths, "Widths [m]: list or lo:hi:count")
      ->required();
  sweep
      ->add_option("--separations", raw.separations,
                   "Separations [m]: list or lo:hi:count")
      ->required();
  sweep->add_option("--horizon,-T", raw.horizon, "Time horizon T [s]")
      ->required();
  criteria_options(sweep, cfg);
  common_options(sweep, cfg, raw, true);

  oracle->add_option("--seed", cfg.seed, "RNG seed");
  oracle->add_option("--samples", cfg.samples, "Samples per integral");
  common_options(oracle, cfg, raw, true);

  covariance->add_option("--grid", cfg.grid, "Points per axis");
  covariance->add_option("--box-length", raw.box_length,
                         "Box edge in units of a (default 64)");
  covariance->add_option("--dt", cfg.dt, "Time step");
  covariance->add_option("--realizations", cfg.realizations,
                         "Independent field realizations");
  covariance->add_option("--cells", raw.cells,
                         "Separations in grid cells, comma list");
  covariance->add_option("--seed", cfg.seed, "RNG seed");
  common_options(covariance, cfg, raw, true);

  packet_options(simulate, raw, true);
  simulate->add_option("--grid", cfg.grid, "Points per axis");
  simulate->add_option("--box-length", raw.box_length,
                       "Box edge in units of a (default: sized to the packets)");
  simulate->add_option("--steps", cfg.steps, "Time steps");
  simulate->add_option("--members", cfg.members, "Ensemble size");
  simulate->add_option("--seed", cfg.seed, "RNG seed");
  common_options(simulate, cfg, raw, true);

  for (auto* sub : app.get_subcommands({})) {
    for (auto* opt : sub->get_options({})) {
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
  }

  // Locate the subcommand and any --config path before CLI11 sees the args.
  std::vector<std::string> argv(args.begin(), args.end());
  CLI::App* chosen = nullptr;
  std::size_t chosen_at = 0;
  std::string config_path;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (chosen == nullptr) {
      if (auto* sub = app.get_subcommand_no_throw(argv[i])) {
        chosen = sub;
        chosen_at = i;
      }
      continue;
    }
    if (argv[i] == "--config" && i + 1 < argv.size()) {
      config_path = argv[i + 1];
    } else if (argv[i].rfind("--config=", 0) == 0) {
      config_path = argv[i].substr(9);
    }
  }
  if (chosen != nullptr && !config_path.empty()) {
    std::vector<std::string> injected;
    std::map<std::string, bool> seen;
    for (auto [key, value] : load_config_file(config_path)) {
      std::replace(key.begin(), key.end(), '_', '-');
      if (seen[key]) throw UsageError("duplicate config key '" + key + "'");
      seen[key] = true;
      const CLI::Option* opt = nullptr;
      if (key != "config" && key != "help") {
        opt = chosen->get_option_no_throw("--" + key);
        if (opt == nullptr && key.size() == 1) {
          opt = chosen->get_option_no_throw("-" + key);
        }
      }
      if (opt == nullptr) {
        throw UsageError("unknown config key '" + key + "' for " +
                         chosen->get_name());
      }
      injected.push_back("--" + opt->get_lnames().front() + "=" + value);
    }
    argv.insert(argv.begin() + static_cast<std::ptrdiff_t>(chosen_at) + 1,
                injected.begin(), injected.end());
  }

  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    return InfoRequest{subs.empty() ? app.help() : subs.front()->help()};
  } catch (const CLI::CallForAllHelp&) {
    return InfoRequest{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::CallForVersion& e) {
    return InfoRequest{std::string(e.what()) + "\n"};
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    const std::string usage =
        subs.empty() ? app.help() : subs.front()->help();
    throw UsageError(std::string(e.what()) + "\n\n" + usage);
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  cfg.format = raw.format == "json" ? Format::json : Format::csv;
  if (given(sub, "--box-length")) cfg.box_length = raw.box_length;
  require(!cfg.output.empty(), "output", "empty path");

  if (name == "variance") {
    cfg.command = Command::variance;
    resolve_packets(sub, raw, cfg, true, false);
  } else if (name == "criteria") {
    cfg.command = Command::criteria;
    validate_common(cfg);
    require(cfg.band >= 0 && cfg.band < 1, "band", "must be in [0, 1)");
    resolve_packets(sub, raw, cfg, false, true);
    require(!cfg.packets || cfg.packets->separation > 0, "separation (R)",
            "must be positive");
    require(!cfg.scaled || cfg.scaled->rho > 0, "rho", "must be positive");
  } else if (name == "sweep") {
    cfg.command = Command::sweep;
    validate_common(cfg);
    cfg.masses = parse_list(raw.masses, "masses");
    cfg.widths = parse_list(raw.widths, "widths");
    cfg.separations = parse_list(raw.separations, "separations");
    try {
      for (const double m : cfg.masses) {
        for (const double a : cfg.widths) {
          for (const double r : cfg.separations) {
            nondimensionalize(make_params(m, a, r, raw.horizon));
          }
        }
      }
    } catch (const DomainError& e) {
      throw from_domain(e);
    } catch (const std::range_error& e) {
      throw UsageError(std::string("sweep point out of range: ") + e.what());
    }
    cfg.horizon = raw.horizon;
  } else if (name == "oracle") {
    cfg.command = Command::oracle;
    require(cfg.samples >= kMinOracleSamples, "samples",
            "at least " + std::to_string(kMinOracleSamples));
  } else if (name == "covariance") {
    cfg.command = Command::covariance;
    validate_grid(cfg);
    require(std::isfinite(cfg.dt) && cfg.dt > 0, "dt", "must be positive");
    require(cfg.realizations >= 100, "realizations", "at least 100");
    if (!raw.cells.empty()) cfg.cells = parse_cells(raw.cells);
    for (const int c : cfg.cells) {
      require(c <= cfg.grid / 2, "cells", "at most grid/2");
    }
  } else {
    cfg.command = Command::simulate;
    validate_grid(cfg);
    require(cfg.steps >= 1, "steps", "at least 1");
    require(cfg.members >= kMinMembers, "members",
            "at least " + std::to_string(kMinMembers));
    resolve_packets(sub, raw, cfg, true, false);
  }
  return cfg;
}

}  // namespace sndeco::cli
