#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sndeco/cli/config.hpp"
#include "sndeco/cli/emit.hpp"

namespace sndeco::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

struct Outcome {
  std::vector<ResultRecord> records;
  bool passed = true;  // verification subcommands only
};

/// Runs one subcommand on a validated config.
Outcome execute(const RunConfig& cfg);

/// Full front end: parse, execute, emit. Returns the process exit code.
int run(std::span<const std::string> args, std::ostream& out,
        std::ostream& err);

int run(int argc, char** argv);

/// ISO 8601 UTC; SOURCE_DATE_EPOCH when set, else the wall clock.
std::string run_timestamp();

}  // namespace sndeco::cli
