#include "mcloop/cli/app.hpp"

#include <cstdlib>
#include <ostream>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "mcloop/errors.hpp"

namespace mcloop::cli {

namespace {

// MCLOOP_LOG takes a spdlog level name (trace, debug, info, warn, error,
// off); anything else leaves the default of warn.
void configure_logging() {
  auto logger = spdlog::get("mcloop");
  if (!logger) {
    logger = spdlog::stderr_logger_mt("mcloop");
    spdlog::set_default_logger(logger);
  }
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("MCLOOP_LOG")) {
    const auto parsed = spdlog::level::from_str(env);
    if (parsed != spdlog::level::off || std::string(env) == "off") level = parsed;
  }
  logger->set_level(level);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
      return kExitConfig;
    case ErrorKind::NoCrossing:
      return kExitNoCrossing;
    case ErrorKind::NotSettled:
    case ErrorKind::Unstable:
      return kExitSimulation;
    default:
      return kExitEvaluation;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging();

  CLI::App app{"Frequency-domain analysis of diffusion channels between molecular robots"};
  app.require_subcommand(1, 1);
  std::string config_path;
  Options opts;
  std::string out_dir = ".";
  // Global flags, accepted before or after the subcommand.
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--tolerance-db", opts.tolerance_db, "compare tolerance in dB")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.fallthrough();
  auto* bode = app.add_subcommand("bode", "sweep transfer functions and write CSV datasets");
  auto* cutoff = app.add_subcommand("cutoff", "find a -6 dB cut-off frequency");
  auto* design = app.add_subcommand("design-check", "check the design conditions");
  auto* simulate = app.add_subcommand("simulate", "run the finite-difference simulation");
  auto* compare = app.add_subcommand("compare", "compare simulated and analytic gains");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  opts.out = out_dir;

  try {
    const RunConfig cfg = load_config(config_path);
    if (bode->parsed()) return cmd_bode(cfg, opts, out);
    if (cutoff->parsed()) return cmd_cutoff(cfg, opts, out);
    if (design->parsed()) return cmd_design_check(cfg, opts, out);
    if (simulate->parsed()) return cmd_simulate(cfg, opts, out);
    if (compare->parsed()) return cmd_compare(cfg, opts, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitEvaluation;
  }
  return kExitConfig;
}

}  // namespace mcloop::cli
