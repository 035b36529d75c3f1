#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sndeco/cli/emit.hpp"
#include "sndeco/criteria.hpp"
#include "sndeco/units.hpp"

namespace sndeco::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { variance, criteria, sweep, oracle, covariance, simulate };

const char* to_string(Command c);

/// Bad command line or config file. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help / --version: print `text` to stdout and exit 0.
struct InfoRequest {
  std::string text;
};

struct RunConfig {
  Command command = Command::variance;

  // One packet pair, entered in SI or dimensionless form (at most one).
  std::optional<PacketPair> packets;
  std::optional<DimensionlessParams> scaled;

  double density = 1000.0;  // kg/m^3
  double threshold = Threshold{}.variance_threshold;
  double time_cap = RootOptions{}.time_cap;  // s
  double band = 0.1;

  // sweep axes, SI
  std::vector<double> masses;
  std::vector<double> widths;
  std::vector<double> separations;
  double horizon = 0.0;  // s

  std::uint64_t seed = 42;
  std::uint64_t samples = 1000000;

  int grid = 64;
  std::optional<double> box_length;  // covariance default 64, simulate auto
  double dt = 1.0;
  int realizations = 2000;
  std::vector<int> cells = {4, 6, 8, 12, 16};
  int members = 512;
  int steps = 32;

  unsigned threads = 0;
  Format format = Format::csv;
  std::string output = "-";
};

/// key = value pairs from a config file, in file order.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Reads a flat `key = value` file, or a JSON object when the first
/// non-blank character is '{'. Arrays become comma-separated lists.
ConfigEntries load_config_file(const std::string& path);
ConfigEntries parse_config_text(const std::string& text);

/// Parses a full argument list (without the program name). Values from
/// --config are applied first, so explicit flags win. Physical parameters
/// are validated before returning.
std::variant<RunConfig, InfoRequest> parse_config(
    std::span<const std::string> args);

/// "1,2,3" or "lo:hi:count" (log-spaced, inclusive).
std::vector<double> parse_list(const std::string& text, const std::string& key);

}  // namespace sndeco::cli
