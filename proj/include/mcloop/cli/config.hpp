#pragma once

// Run configuration read from a JSON document. Units are fixed: um, s, uM.
// Every section is optional at parse time; commands check for the sections
// they need and report a ConfigError naming the missing one.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mcloop/analysis.hpp"
#include "mcloop/boundary.hpp"
#include "mcloop/diffusion.hpp"
#include "mcloop/feedback.hpp"

namespace mcloop::cli {

struct ChannelSection {
  double mu = 0.0;
  double L = 0.0;
  BoundaryKind b0 = BoundaryKind::Dirichlet;
  BoundaryKind bL = BoundaryKind::Neumann;
};

struct SweepSection {
  double omega_min = 1e-4;
  double omega_max = 1e2;
  std::size_t points = 200;
  std::vector<std::string> outputs{"gamma0L"};
};

struct CutoffSection {
  // Boundary pair to search; defaults to the channel's own pair.
  std::optional<std::string> boundaries;
  std::string target = "G21";
  CutoffReference reference = CutoffReference::Absolute;
  double level_db = -6.0;
};

struct SimulateSection {
  double omega = 1e-2;
  double amplitude = 1.0;
  std::optional<double> offset;
  std::size_t n_cells = 0;
  double cfl = 0.25;
  double duration = 0.0;
  std::size_t record_stride = 0;
  // Used by compare: every omega is run at every distance.
  std::vector<double> omegas{1e-3, 1e-2, 1e-1};
  std::vector<double> distances;
};

struct RunConfig {
  std::optional<ChannelSection> channel;
  std::optional<TransmembraneParams> transmembrane;  // mu filled from channel
  std::optional<LigandReceptorParams> ligand_receptor;
  RobotDynamics robot0;
  RobotDynamics robotL;
  std::optional<DesignSpec> design;  // mu, k and receptor fields filled in
  std::optional<SweepSection> sweep;
  std::optional<CutoffSection> cutoff;
  std::optional<SimulateSection> simulate;
};

// Throws Error(ConfigError) on malformed JSON, unknown keys, wrong types or
// values outside their domain.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Accessors that throw Error(ConfigError) when the section is absent.
DiffusionChannel require_channel(const RunConfig& cfg);
Interconnection require_interconnection(const RunConfig& cfg);
const DesignSpec& require_design(const RunConfig& cfg);

}  // namespace mcloop::cli
