#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "losch/config.hpp"

namespace losch {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
};

struct RunOptions {
  std::optional<std::string> out_dir;  // overrides output.dir
  std::optional<std::uint64_t> seed;   // overrides the config seed
  int threads = 1;
};

// Runs one subcommand ("amplitude", "phase", "two-sided", "scaling", "ldos",
// "noise", "baseline-hadamard", "baseline-sequential", "cost") and returns
// the paths written. Throws on failure.
std::vector<std::string> run_command(const std::string& command, ExperimentConfig config,
                                     const RunOptions& options);

// Full command line entry point; maps failures onto the exit codes above.
int run_cli(int argc, char** argv);

}  // namespace losch
