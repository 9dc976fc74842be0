#pragma once

#include <filesystem>
#include <iosfwd>

#include "mcloop/cli/config.hpp"

namespace mcloop::cli {

// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailed = 1,       // design condition failed or compare over tolerance
  kExitConfig = 2,
  kExitEvaluation = 3,
  kExitNoCrossing = 4,
  kExitSimulation = 5,   // NotSettled or Unstable
};

struct Options {
  std::filesystem::path out = ".";
  double tolerance_db = 0.5;
  unsigned jobs = 1;
};

// Each command writes its datasets under opts.out and a human-readable report
// to `report`. Library errors propagate; run() maps them to exit codes.
int cmd_bode(const RunConfig& cfg, const Options& opts, std::ostream& report);
int cmd_cutoff(const RunConfig& cfg, const Options& opts, std::ostream& report);
int cmd_design_check(const RunConfig& cfg, const Options& opts, std::ostream& report);
int cmd_simulate(const RunConfig& cfg, const Options& opts, std::ostream& report);
int cmd_compare(const RunConfig& cfg, const Options& opts, std::ostream& report);

// Full command line: parses flags, loads the config, dispatches and converts
// errors into the exit codes above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcloop::cli
