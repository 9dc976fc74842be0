#include "mcloop/fdm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "mcloop/errors.hpp"

namespace mcloop {

double Drive::period() const { return 2.0 * std::numbers::pi / omega; }

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::ConfigError, what);
}

void validate(const SimConfig& cfg) {
  if (cfg.channel.b0() != BoundaryKind::Dirichlet || cfg.channel.bL() != BoundaryKind::Neumann) {
    config_error("simulation supports the transmembrane (r = 0) / receptor (r = L) pair only");
  }
  const double mu = cfg.channel.mu();
  if (cfg.membrane.mu != 0.0 && cfg.membrane.mu != mu) config_error("membrane mu != channel mu");
  if (cfg.receptor.mu != 0.0 && cfg.receptor.mu != mu) config_error("receptor mu != channel mu");
  if (!(cfg.membrane.k >= 0.0)) config_error("k must be nonnegative");
  if (!(cfg.membrane.dr > 0.0)) config_error("dr must be positive");
  const auto& rc = cfg.receptor;
  if (!(rc.k_on >= 0.0 && rc.k_off >= 0.0 && rc.k_re >= 0.0 && rc.R >= 0.0)) {
    config_error("receptor rates and count must be nonnegative");
  }
  if (cfg.n_cells != 0 && cfg.n_cells < 51) config_error("n_cells must be at least 51");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 0.5)) config_error("cfl must lie in (0, 0.5]");
  if (!(cfg.drive.amplitude >= 0.0) || !std::isfinite(cfg.drive.amplitude)) {
    config_error("drive amplitude must be nonnegative");
  }
  if (!(cfg.drive.omega > 0.0) || !std::isfinite(cfg.drive.omega)) {
    config_error("drive omega must be positive");
  }
  if (!(cfg.duration >= 0.0) || !std::isfinite(cfg.duration)) {
    config_error("duration must be positive");
  }
  if (!cfg.initial_field.empty() && cfg.initial_field.size() != resolved_cells(cfg)) {
    config_error("initial field length does not match n_cells");
  }
}

}  // namespace

std::size_t resolved_cells(const SimConfig& cfg) {
  if (cfg.n_cells != 0) return cfg.n_cells;
  const auto per_um = static_cast<std::size_t>(std::lround(cfg.channel.length()));
  return std::max<std::size_t>(51, per_um + 1);
}

double resolved_duration(const SimConfig& cfg) {
  if (cfg.duration > 0.0) return cfg.duration;
  const double L = cfg.channel.length();
  return std::max(8.0 * cfg.drive.period(), 5.0 * L * L / cfg.channel.mu());
}

SimResult simulate(const SimConfig& cfg) {
  validate(cfg);
  const std::size_t n = resolved_cells(cfg);
  const double L = cfg.channel.length();
  const double mu = cfg.channel.mu();
  const double dx = L / static_cast<double>(n - 1);
  const double dr = cfg.membrane.dr;
  const double k = cfg.membrane.k;
  const double k_on = cfg.receptor.k_on;
  const double k_off = cfg.receptor.k_off;
  const double k_re = cfg.receptor.k_re;
  const double R = cfg.receptor.R;

  // Largest diagonal decay rate of the semi-discrete system. dt = 2 cfl /
  // rate keeps every explicit update a convex combination for cfl <= 0.5,
  // and reduces to cfl dx^2 / mu when the interior dominates.
  const double r_int = mu / (dx * dx);
  const double rate = std::max({2.0 * r_int, k + mu / (dr * dx),
                                2.0 * r_int + 2.0 * R * k_on / dx, k_off});
  const double duration = resolved_duration(cfg);
  const auto steps = static_cast<std::size_t>(std::ceil(duration * rate / (2.0 * cfg.cfl)));
  const double dt = duration / static_cast<double>(steps);

  const Drive& drive = cfg.drive;
  const double offset = drive.offset_value();
  std::size_t stride = cfg.record_stride;
  if (stride == 0) {
    stride = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(drive.period() / (400.0 * dt))));
  }
  const std::size_t records = steps / stride + 1;
  std::size_t snapshot_every = cfg.snapshot_every;
  if (snapshot_every == 0) snapshot_every = std::max<std::size_t>(1, records / 64);

  std::vector<double> c(n, 0.0);
  if (!cfg.initial_field.empty()) c = cfg.initial_field;
  std::vector<double> next(n, 0.0);
  double bound = cfg.initial_bound;

  double scale = std::abs(offset) + drive.amplitude;
  for (double v : c) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, std::abs(bound));
  const double blowup = 1e6 * std::max(scale, 1e-300);

  SimResult res;
  res.dx = dx;
  res.dt = dt;
  res.steps = steps;
  res.drive_amplitude = drive.amplitude;
  res.drive_omega = drive.omega;
  for (auto* trace : {&res.times, &res.drive, &res.c_out, &res.z_L, &res.y_L, &res.c_A, &res.mass}) {
    trace->reserve(records);
  }

  auto record = [&](std::size_t step) {
    const double t = static_cast<double>(step) * dt;
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) interior += c[i];
    const double mass = dr * c[0] + dx * (interior + 0.5 * c[n - 1]) + bound;
    for (double v : c) {
      if (!(std::abs(v) <= blowup)) {
        std::ostringstream msg;
        msg << "field exceeded 1e6 x drive scale at t = " << t << " s";
        throw Error(ErrorKind::Unstable, msg.str());
      }
    }
    res.times.push_back(t);
    res.drive.push_back(offset + drive.amplitude * std::cos(drive.omega * t));
    res.c_out.push_back(c[0]);
    res.z_L.push_back(c[n - 1]);
    res.c_A.push_back(bound);
    res.y_L.push_back(k_re * bound);
    res.mass.push_back(mass);
    if ((res.times.size() - 1) % snapshot_every == 0) {
      res.snapshot_times.push_back(t);
      res.c_field.push_back(c);
    }
  };

  record(0);
  for (std::size_t step = 1; step <= steps; ++step) {
    const double t = static_cast<double>(step - 1) * dt;
    const double c0 = offset + drive.amplitude * std::cos(drive.omega * t);

    // r = 0: c_out exchanges with the robot and with the first interior node.
    next[0] = c[0] + dt * (k * (c0 - c[0]) + (mu / dr) * (c[1] - c[0]) / dx);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      next[i] = c[i] + dt * r_int * (c[i + 1] - 2.0 * c[i] + c[i - 1]);
    }
    // r = L: -mu dc/dr = binding rate, imposed through a ghost node.
    const double binding = -k_off * bound + R * k_on * c[n - 1];
    next[n - 1] = c[n - 1] + dt * (2.0 * r_int * (c[n - 2] - c[n - 1]) - 2.0 * binding / dx);
    bound += dt * binding;
    c.swap(next);

    if (step % stride == 0) record(step);
  }
  return res;
}

SinusoidFit fit_sinusoid(const std::vector<double>& times, const std::vector<double>& values,
                         double omega, double t_from) {
  const auto first = std::lower_bound(times.begin(), times.end(), t_from) - times.begin();
  const auto count = static_cast<Eigen::Index>(times.size()) - first;
  if (count < 3) throw Error(ErrorKind::NotSettled, "too few samples to fit a sinusoid");
  Eigen::MatrixXd design(count, 3);
  Eigen::VectorXd rhs(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double t = times[first + i];
    design(i, 0) = std::cos(omega * t);
    design(i, 1) = std::sin(omega * t);
    design(i, 2) = 1.0;
    rhs(i) = values[first + i];
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
  SinusoidFit fit;
  fit.amplitude = std::hypot(coef(0), coef(1));
  fit.phase = std::atan2(coef(1), coef(0));
  fit.offset = coef(2);
  return fit;
}

EmpiricalGain empirical_gain(const SimResult& res, double drive_omega) {
  if (!(res.drive_amplitude > 0.0)) {
    throw Error(ErrorKind::InvalidParam, "gain is undefined for a zero-amplitude drive");
  }
  if (res.times.empty()) throw Error(ErrorKind::NotSettled, "no samples recorded");
  const double period = 2.0 * std::numbers::pi / drive_omega;
  const double t_end = res.times.back();
  if (t_end < 3.0 * period * (1.0 - 1e-9)) {
    throw Error(ErrorKind::NotSettled, "run shorter than three drive periods");
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int p = 3; p >= 1; --p) {
    const double from = t_end - p * period;
    const double to = from + period;
    std::vector<double> ts, vs;
    for (std::size_t i = 0; i < res.times.size(); ++i) {
      if (res.times[i] >= from && res.times[i] <= to) {
        ts.push_back(res.times[i]);
        vs.push_back(res.z_L[i]);
      }
    }
    if (ts.size() < 8) throw Error(ErrorKind::NotSettled, "fewer than 8 samples per period");
    const double amp = fit_sinusoid(ts, vs, drive_omega, from).amplitude;
    lo = std::min(lo, amp);
    hi = std::max(hi, amp);
  }

  EmpiricalGain out;
  out.drift = hi > 0.0 ? hi / lo - 1.0 : 0.0;
  if (!(out.drift < 0.01)) {
    std::ostringstream msg;
    msg << "output amplitude drifts by " << 100.0 * out.drift << " % over the last three periods";
    throw Error(ErrorKind::NotSettled, msg.str());
  }
  const SinusoidFit fit = fit_sinusoid(res.times, res.z_L, drive_omega, t_end - 3.0 * period);
  out.amplitude_out = fit.amplitude;
  out.ratio = fit.amplitude / res.drive_amplitude;
  out.gain_db = 20.0 * std::log10(out.ratio);
  out.phase = fit.phase;
  return out;
}

}  // namespace mcloop
