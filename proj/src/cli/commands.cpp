#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "mcloop/analysis.hpp"
#include "mcloop/cli/app.hpp"
#include "mcloop/cli/csv.hpp"
#include "mcloop/errors.hpp"
#include "mcloop/fdm.hpp"
#include "mcloop/feedback.hpp"

namespace mcloop::cli {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::ConfigError, what);
}

std::optional<std::pair<Side, Side>> diffusion_entry_name(const std::string& name) {
  static const std::map<std::string, std::pair<Side, Side>> entries{
      {"G11", {Side::Origin, Side::Origin}},
      {"G12", {Side::Far, Side::Origin}},
      {"G21", {Side::Origin, Side::Far}},
      {"G22", {Side::Far, Side::Far}},
  };
  const auto it = entries.find(name);
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

// Transfer function selected by name. Diffusion entries need only the
// channel; everything else needs the full transmembrane/receptor loop.
FrequencyFunction named_function(const RunConfig& cfg, const std::string& name) {
  if (auto entry = diffusion_entry_name(name)) {
    return diffusion_entry(require_channel(cfg), entry->first, entry->second);
  }
  using Getter = cplx (*)(const Interconnection&, ComplexFreq);
  static const std::map<std::string, Getter> loop{
      {"gamma0L", [](const Interconnection& ic, ComplexFreq s) { return channel_gamma(ic, s).gamma_0L; }},
      {"gammaL0", [](const Interconnection& ic, ComplexFreq s) { return channel_gamma(ic, s).gamma_L0; }},
      {"S0", [](const Interconnection& ic, ComplexFreq s) { return self_interference(ic, s, Side::Origin); }},
      {"SL", [](const Interconnection& ic, ComplexFreq s) { return self_interference(ic, s, Side::Far); }},
      {"H0_11", [](const Interconnection& ic, ComplexFreq s) { return eval_H(ic.h0(), s)(0, 0); }},
      {"H0_12", [](const Interconnection& ic, ComplexFreq s) { return eval_H(ic.h0(), s)(0, 1); }},
      {"H0_21", [](const Interconnection& ic, ComplexFreq s) { return eval_H(ic.h0(), s)(1, 0); }},
      {"H0_22", [](const Interconnection& ic, ComplexFreq s) { return eval_H(ic.h0(), s)(1, 1); }},
      {"HL_11", [](const Interconnection& ic, ComplexFreq s) { return eval_H(ic.hL(), s)(0, 0); }},
      {"HL_21", [](const Interconnection& ic, ComplexFreq s) { return eval_H(ic.hL(), s)(1, 0); }},
      {"M0L_exact", [](const Interconnection& ic, ComplexFreq s) { return respond(ic, s).M0L_exact; }},
      {"M0L_approx", [](const Interconnection& ic, ComplexFreq s) { return entire_channel_M0L_approx(ic, s); }},
      {"MLL_exact", [](const Interconnection& ic, ComplexFreq s) { return respond(ic, s).MLL_exact; }},
  };
  const auto it = loop.find(name);
  if (it == loop.end()) config_error("unknown transfer function '" + name + "'");
  const Interconnection ic = require_interconnection(cfg);
  const Getter get = it->second;
  return [ic, get](ComplexFreq s) { return get(ic, s); };
}

// Short form for human-readable reports; datasets keep 17 digits.
std::string brief(double x) {
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 4);
  return std::string(buf.data(), r.ptr);
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_atomic(path, doc.dump(2) + "\n");
}

SimConfig sim_config(const RunConfig& cfg, const DiffusionChannel& channel, double omega) {
  if (!cfg.transmembrane || !cfg.ligand_receptor) {
    config_error("config: sections 'transmembrane' and 'ligand_receptor' are required");
  }
  if (!cfg.simulate) config_error("config: missing section 'simulate'");
  const SimulateSection& s = *cfg.simulate;
  SimConfig sc(channel);
  sc.membrane = *cfg.transmembrane;
  sc.receptor = *cfg.ligand_receptor;
  sc.n_cells = s.n_cells;
  sc.cfl = s.cfl;
  sc.duration = s.duration;
  sc.record_stride = s.record_stride;
  sc.drive.amplitude = s.amplitude;
  sc.drive.omega = omega;
  sc.drive.offset = s.offset;
  return sc;
}

}  // namespace

int cmd_bode(const RunConfig& cfg, const Options& opts, std::ostream& report) {
  if (!cfg.sweep) config_error("config: missing section 'sweep'");
  const SweepSection& sw = *cfg.sweep;
  const auto grid = log_grid(sw.omega_min, sw.omega_max, sw.points);

  // Resolve every name before evaluating anything so a typo costs nothing.
  std::vector<std::pair<std::string, FrequencyFunction>> fns;
  for (const auto& name : sw.outputs) fns.emplace_back(name, named_function(cfg, name));

  for (const auto& [name, fn] : fns) {
    spdlog::info("sweeping {} over {} points", name, grid.size());
    const GainCurve curve = sweep(fn, grid, opts.jobs);
    const auto path = opts.out / (name + ".csv");
    write_atomic(path, to_csv(gain_curve_table(curve)));
    const auto [lo, hi] = std::minmax_element(curve.gain_db.begin(), curve.gain_db.end());
    report << name << ": " << curve.size() << " points, gain " << format_double(*lo) << " to "
           << format_double(*hi) << " dB -> " << path.string() << "\n";
  }
  return kExitOk;
}

int cmd_cutoff(const RunConfig& cfg, const Options& opts, std::ostream& report) {
  const CutoffSection section = cfg.cutoff.value_or(CutoffSection{});
  DiffusionChannel channel = require_channel(cfg);
  if (section.boundaries) {
    const auto [b0, bL] = parse_boundary_tag(*section.boundaries);
    channel = DiffusionChannel(channel.mu(), channel.length(), b0, bL);
  }
  FrequencyFunction fn;
  if (auto entry = diffusion_entry_name(section.target)) {
    fn = diffusion_entry(channel, entry->first, entry->second);
  } else {
    if (section.boundaries && *section.boundaries != "dn") {
      config_error("cutoff: only diffusion entries can use a boundary override");
    }
    fn = named_function(cfg, section.target);
  }

  CutoffOptions co;
  co.reference = section.reference;
  co.level_db = section.level_db;
  co.omega_scale = channel.mu() / (channel.length() * channel.length());
  const CutoffResult r = cutoff_frequency(fn, co);

  const std::string tag(boundary_tag(channel.b0(), channel.bL()));
  report << "target          " << section.target << " (" << tag << ")\n"
         << "reference       " << to_string(r.reference) << "\n"
         << "target level    " << format_double(r.target_db) << " dB\n"
         << "omega_c         " << format_double(r.omega_c) << " rad/s\n"
         << "omega_hat       " << format_double(r.omega_hat) << "\n"
         << "gain at cut-off " << format_double(r.gain_at_cutoff_db) << " dB\n";
  if (r.steady_gain_db) report << "steady gain     " << format_double(*r.steady_gain_db) << " dB\n";

  json doc{{"target", section.target},
           {"boundaries", tag},
           {"mu", channel.mu()},
           {"L", channel.length()},
           {"reference", std::string(to_string(r.reference))},
           {"level_db", section.level_db},
           {"target_db", r.target_db},
           {"omega_c", r.omega_c},
           {"omega_hat", r.omega_hat},
           {"gain_at_cutoff_db", r.gain_at_cutoff_db},
           {"iterations", r.iterations}};
  doc["steady_gain_db"] = r.steady_gain_db ? json(*r.steady_gain_db) : json(nullptr);
  write_json(opts.out / "cutoff.json", doc);
  return kExitOk;
}

int cmd_design_check(const RunConfig& cfg, const Options& opts, std::ostream& report) {
  const DesignReport r = design_check(require_design(cfg));
  json conditions = json::array();
  for (const auto& c : r.conditions) {
    report << "(" << c.id << ") " << (c.passed ? "PASS" : "FAIL") << "  " << c.description
           << ": " << brief(c.value) << " " << c.relation << " " << brief(c.threshold) << "\n";
    conditions.push_back({{"id", c.id},
                          {"description", c.description},
                          {"passed", c.passed},
                          {"value", c.value},
                          {"relation", c.relation},
                          {"threshold", c.threshold}});
  }
  report << "omega_D " << brief(r.omega_D) << " rad/s, omega_H0 " << brief(r.omega_H0)
         << " rad/s, omega_M " << brief(r.omega_M) << " rad/s, alpha " << brief(r.alpha) << "\n";
  json doc{{"conditions", conditions},
           {"omega_D", r.omega_D},
           {"omega_H0", r.omega_H0},
           {"omega_M", r.omega_M},
           {"alpha", r.alpha},
           {"all_passed", r.all_passed()}};
  write_json(opts.out / "design.json", doc);
  return r.all_passed() ? kExitOk : kExitFailed;
}

int cmd_simulate(const RunConfig& cfg, const Options& opts, std::ostream& report) {
  const DiffusionChannel channel = require_channel(cfg);
  if (!cfg.simulate) config_error("config: missing section 'simulate'");
  const SimConfig sc = sim_config(cfg, channel, cfg.simulate->omega);
  spdlog::info("simulating L = {} um at omega = {} rad/s", channel.length(), sc.drive.omega);
  const SimResult res = simulate(sc);

  CsvTable series;
  series.header = {"t_s", "c0", "c_out", "z_L", "c_A", "y_L", "mass"};
  for (std::size_t i = 0; i < res.times.size(); ++i) {
    series.rows.push_back({res.times[i], res.drive[i], res.c_out[i], res.z_L[i], res.c_A[i],
                           res.y_L[i], res.mass[i]});
  }
  write_atomic(opts.out / "simulate.csv", to_csv(series));

  CsvTable field;
  field.header = {"t_s", "r_um", "c"};
  for (std::size_t k = 0; k < res.snapshot_times.size(); ++k) {
    for (std::size_t i = 0; i < res.c_field[k].size(); ++i) {
      field.rows.push_back({res.snapshot_times[k], res.dx * static_cast<double>(i), res.c_field[k][i]});
    }
  }
  write_atomic(opts.out / "field.csv", to_csv(field));

  report << "steps " << res.steps << ", dt " << format_double(res.dt) << " s, dx "
         << format_double(res.dx) << " um, " << res.times.size() << " samples\n";
  if (sc.drive.amplitude > 0.0) {
    const EmpiricalGain g = empirical_gain(res, sc.drive.omega);
    report << "z_L gain " << format_double(g.gain_db) << " dB (ratio " << format_double(g.ratio)
           << ", drift " << format_double(g.drift) << ")\n";
  }
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, const Options& opts, std::ostream& report) {
  const DiffusionChannel base = require_channel(cfg);
  const Interconnection base_ic = require_interconnection(cfg);
  if (!cfg.simulate) config_error("config: missing section 'simulate'");
  const SimulateSection& s = *cfg.simulate;
  if (!(s.amplitude > 0.0)) config_error("simulate.amplitude must be positive for compare");
  const std::vector<double> distances =
      s.distances.empty() ? std::vector<double>{base.length()} : s.distances;

  struct Task {
    double L = 0.0;
    double omega = 0.0;
    double analytic_db = 0.0;
    double fdm_db = 0.0;
    double drift = 0.0;
  };
  std::vector<Task> tasks;
  for (double L : distances) {
    for (double w : s.omegas) tasks.push_back(Task{L, w});
  }
  // Validate every configuration up front so a bad entry fails before any
  // long run starts.
  for (const auto& t : tasks) {
    const DiffusionChannel ch(base.mu(), t.L, base.b0(), base.bL());
    (void)sim_config(cfg, ch, t.omega);
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      Task& t = tasks[i];
      try {
        const DiffusionChannel ch(base.mu(), t.L, base.b0(), base.bL());
        const Interconnection ic(ch, base_ic.h0(), base_ic.hL(), base_ic.f0(), base_ic.fL());
        t.analytic_db = gain_db(channel_gamma(ic, ComplexFreq::jw(t.omega)).gamma_0L);
        const SimResult res = simulate(sim_config(cfg, ch, t.omega));
        const EmpiricalGain g = empirical_gain(res, t.omega);
        t.fdm_db = g.gain_db;
        t.drift = g.drift;
        spdlog::info("L = {} um, omega = {}: analytic {} dB, fdm {} dB", t.L, t.omega,
                     t.analytic_db, t.fdm_db);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next = tasks.size();
      }
    }
  };
  {
    const unsigned n = std::max(1u, std::min<unsigned>(opts.jobs, tasks.size()));
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  CsvTable table;
  table.header = {"L_um", "omega_rad_s", "analytic_db", "fdm_db", "delta_db", "drift"};
  double worst = 0.0;
  json rows = json::array();
  for (const auto& t : tasks) {
    const double delta = t.fdm_db - t.analytic_db;
    worst = std::max(worst, std::abs(delta));
    table.rows.push_back({t.L, t.omega, t.analytic_db, t.fdm_db, delta, t.drift});
    rows.push_back({{"L_um", t.L},
                    {"omega_rad_s", t.omega},
                    {"analytic_db", t.analytic_db},
                    {"fdm_db", t.fdm_db},
                    {"delta_db", delta}});
    report << "L " << format_double(t.L) << " um  omega " << format_double(t.omega)
           << " rad/s  analytic " << format_double(t.analytic_db) << " dB  fdm "
           << format_double(t.fdm_db) << " dB  delta " << format_double(delta) << " dB\n";
  }
  write_atomic(opts.out / "compare.csv", to_csv(table));
  const bool ok = worst <= opts.tolerance_db;
  write_json(opts.out / "compare.json", json{{"points", rows},
                                            {"max_abs_delta_db", worst},
                                            {"tolerance_db", opts.tolerance_db},
                                            {"passed", ok}});
  report << "max |delta| " << format_double(worst) << " dB, tolerance "
         << format_double(opts.tolerance_db) << " dB: " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitFailed;
}

}  // namespace mcloop::cli
