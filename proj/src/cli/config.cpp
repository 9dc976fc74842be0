#include "mcloop/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "json.hpp"
#include "mcloop/errors.hpp"

namespace mcloop::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ConfigError, where + ": " + what);
}

void only_keys(const json& obj, const std::string& where,
               std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto key : allowed) known = known || item.key() == key;
    if (!known) fail(where, "unknown key '" + item.key() + "'");
  }
}

double number(const json& obj, const std::string& where, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where + "." + key, "must be finite");
  return x;
}

void read(const json& obj, const std::string& where, const char* key, double& out) {
  if (obj.contains(key)) out = number(obj, where, key);
}

void read_positive(const json& obj, const std::string& where, const char* key, double& out) {
  read(obj, where, key, out);
  if (obj.contains(key) && !(out > 0.0)) fail(where + "." + key, "must be positive");
}

void read_nonnegative(const json& obj, const std::string& where, const char* key, double& out) {
  read(obj, where, key, out);
  if (obj.contains(key) && !(out >= 0.0)) fail(where + "." + key, "must be nonnegative");
}

void read_count(const json& obj, const std::string& where, const char* key, std::size_t& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(where + "." + key, "expected a nonnegative integer");
  }
  out = v.get<std::size_t>();
}

std::string text(const json& obj, const std::string& where, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

void require(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) fail(where, std::string("missing required key '") + key + "'");
}

std::vector<double> number_list(const json& obj, const std::string& where, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_array()) fail(where + "." + key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number() || !(x.get<double>() > 0.0) || !std::isfinite(x.get<double>())) {
      fail(where + "." + key, "entries must be positive numbers");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

BoundaryKind boundary_kind(const json& obj, const std::string& where, const char* key) {
  const std::string s = text(obj, where, key);
  if (s == "dirichlet" || s == "d") return BoundaryKind::Dirichlet;
  if (s == "neumann" || s == "n") return BoundaryKind::Neumann;
  fail(where + "." + key, "expected \"dirichlet\" or \"neumann\"");
}

ChannelSection parse_channel(const json& j) {
  const std::string w = "channel";
  only_keys(j, w, {"mu", "L", "b0", "bL", "boundaries"});
  require(j, w, "mu");
  require(j, w, "L");
  ChannelSection c;
  read_positive(j, w, "mu", c.mu);
  read_positive(j, w, "L", c.L);
  if (j.contains("boundaries")) {
    if (j.contains("b0") || j.contains("bL")) fail(w, "give either boundaries or b0/bL");
    try {
      std::tie(c.b0, c.bL) = parse_boundary_tag(text(j, w, "boundaries"));
    } catch (const Error& e) {
      fail(w + ".boundaries", e.what());
    }
  }
  if (j.contains("b0")) c.b0 = boundary_kind(j, w, "b0");
  if (j.contains("bL")) c.bL = boundary_kind(j, w, "bL");
  return c;
}

TransmembraneParams parse_transmembrane(const json& j) {
  const std::string w = "transmembrane";
  only_keys(j, w, {"k", "dr"});
  require(j, w, "k");
  TransmembraneParams p;
  read_positive(j, w, "k", p.k);
  read_positive(j, w, "dr", p.dr);
  return p;
}

LigandReceptorParams parse_receptor(const json& j) {
  const std::string w = "ligand_receptor";
  only_keys(j, w, {"k_on", "k_off", "k_re", "R"});
  for (const char* key : {"k_on", "k_off", "k_re", "R"}) require(j, w, key);
  LigandReceptorParams p;
  read_positive(j, w, "k_on", p.k_on);
  read_positive(j, w, "k_off", p.k_off);
  read_positive(j, w, "k_re", p.k_re);
  read_positive(j, w, "R", p.R);
  return p;
}

RobotDynamics parse_robot(const json& j, const std::string& w) {
  only_keys(j, w, {"gain", "tau"});
  RobotDynamics f;
  read(j, w, "gain", f.gain);
  read_nonnegative(j, w, "tau", f.tau);
  return f;
}

DesignSpec parse_design(const json& j) {
  const std::string w = "design";
  only_keys(j, w, {"band_hi", "L_min", "L_max", "koff_margin"});
  DesignSpec d;
  read_positive(j, w, "band_hi", d.band_hi);
  read_positive(j, w, "L_min", d.L_min);
  read_positive(j, w, "L_max", d.L_max);
  read_positive(j, w, "koff_margin", d.koff_margin);
  if (d.L_min > d.L_max) fail(w, "L_min exceeds L_max");
  return d;
}

SweepSection parse_sweep(const json& j) {
  const std::string w = "sweep";
  only_keys(j, w, {"omega_min", "omega_max", "points", "outputs"});
  SweepSection s;
  read_positive(j, w, "omega_min", s.omega_min);
  read_positive(j, w, "omega_max", s.omega_max);
  read_count(j, w, "points", s.points);
  if (s.points == 0) fail(w + ".points", "the frequency grid is empty");
  if (s.omega_min > s.omega_max || (s.points > 1 && s.omega_min == s.omega_max)) {
    fail(w, "need omega_min < omega_max");
  }
  if (j.contains("outputs")) {
    const auto& v = j.at("outputs");
    if (!v.is_array() || v.empty()) fail(w + ".outputs", "expected a nonempty array of names");
    s.outputs.clear();
    for (const auto& x : v) {
      if (!x.is_string()) fail(w + ".outputs", "expected strings");
      s.outputs.push_back(x.get<std::string>());
    }
  }
  return s;
}

CutoffSection parse_cutoff(const json& j) {
  const std::string w = "cutoff";
  only_keys(j, w, {"boundaries", "target", "reference", "level_db"});
  CutoffSection c;
  if (j.contains("boundaries")) {
    c.boundaries = text(j, w, "boundaries");
    try {
      parse_boundary_tag(*c.boundaries);
    } catch (const Error& e) {
      fail(w + ".boundaries", e.what());
    }
  }
  if (j.contains("target")) c.target = text(j, w, "target");
  if (j.contains("reference")) {
    const std::string r = text(j, w, "reference");
    if (r == "absolute") {
      c.reference = CutoffReference::Absolute;
    } else if (r == "from_steady") {
      c.reference = CutoffReference::FromSteady;
    } else {
      fail(w + ".reference", "expected \"absolute\" or \"from_steady\"");
    }
  }
  read(j, w, "level_db", c.level_db);
  return c;
}

SimulateSection parse_simulate(const json& j) {
  const std::string w = "simulate";
  only_keys(j, w, {"omega", "amplitude", "offset", "n_cells", "cfl", "duration",
                   "record_stride", "omegas", "distances"});
  SimulateSection s;
  read_positive(j, w, "omega", s.omega);
  read_nonnegative(j, w, "amplitude", s.amplitude);
  if (j.contains("offset")) s.offset = number(j, w, "offset");
  read_count(j, w, "n_cells", s.n_cells);
  read_positive(j, w, "cfl", s.cfl);
  read_positive(j, w, "duration", s.duration);
  read_count(j, w, "record_stride", s.record_stride);
  if (j.contains("omegas")) s.omegas = number_list(j, w, "omegas");
  if (j.contains("distances")) s.distances = number_list(j, w, "distances");
  if (j.contains("omegas") && s.omegas.empty()) fail(w + ".omegas", "must not be empty");
  return s;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed JSON: ") + e.what());
  }
  only_keys(doc, "config",
            {"channel", "transmembrane", "ligand_receptor", "robot0", "robotL", "design", "sweep",
             "cutoff", "simulate"});

  RunConfig cfg;
  if (doc.contains("channel")) cfg.channel = parse_channel(doc["channel"]);
  if (doc.contains("transmembrane")) cfg.transmembrane = parse_transmembrane(doc["transmembrane"]);
  if (doc.contains("ligand_receptor")) cfg.ligand_receptor = parse_receptor(doc["ligand_receptor"]);
  if (doc.contains("robot0")) cfg.robot0 = parse_robot(doc["robot0"], "robot0");
  if (doc.contains("robotL")) cfg.robotL = parse_robot(doc["robotL"], "robotL");
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc["sweep"]);
  if (doc.contains("cutoff")) cfg.cutoff = parse_cutoff(doc["cutoff"]);
  if (doc.contains("simulate")) cfg.simulate = parse_simulate(doc["simulate"]);

  // mu lives in the channel section only; boundary systems inherit it.
  if (cfg.channel) {
    if (cfg.transmembrane) cfg.transmembrane->mu = cfg.channel->mu;
    if (cfg.ligand_receptor) cfg.ligand_receptor->mu = cfg.channel->mu;
  }
  if (doc.contains("design")) {
    DesignSpec d = parse_design(doc["design"]);
    if (!cfg.channel || !cfg.transmembrane || !cfg.ligand_receptor) {
      fail("design", "needs the channel, transmembrane and ligand_receptor sections");
    }
    d.mu = cfg.channel->mu;
    d.k = cfg.transmembrane->k;
    d.dr = cfg.transmembrane->dr;
    d.k_on = cfg.ligand_receptor->k_on;
    d.k_off = cfg.ligand_receptor->k_off;
    d.k_re = cfg.ligand_receptor->k_re;
    d.R = cfg.ligand_receptor->R;
    cfg.design = d;
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

DiffusionChannel require_channel(const RunConfig& cfg) {
  if (!cfg.channel) throw Error(ErrorKind::ConfigError, "config: missing section 'channel'");
  const auto& c = *cfg.channel;
  return DiffusionChannel(c.mu, c.L, c.b0, c.bL);
}

Interconnection require_interconnection(const RunConfig& cfg) {
  const DiffusionChannel ch = require_channel(cfg);
  if (!cfg.transmembrane || !cfg.ligand_receptor) {
    throw Error(ErrorKind::ConfigError,
                "config: sections 'transmembrane' and 'ligand_receptor' are required");
  }
  if (ch.b0() != BoundaryKind::Dirichlet || ch.bL() != BoundaryKind::Neumann) {
    throw Error(ErrorKind::ConfigError,
                "config: the transmembrane/receptor pair needs a Dirichlet origin and Neumann far end");
  }
  return Interconnection(ch, make_transmembrane(*cfg.transmembrane),
                         make_ligand_receptor(*cfg.ligand_receptor), cfg.robot0, cfg.robotL);
}

const DesignSpec& require_design(const RunConfig& cfg) {
  if (!cfg.design) throw Error(ErrorKind::ConfigError, "config: missing section 'design'");
  return *cfg.design;
}

}  // namespace mcloop::cli
