#pragma once

// Explicit finite-difference simulation of the transmembrane/receptor
// channel, used as a time-domain check on the frequency-domain model.
//
// Node 0 holds c_out, the concentration just outside the sending robot,
// exchanging mass with the robot at rate k and with the medium through the
// gradient. The last node is a half cell whose outward flux is the receptor
// binding rate dc_A/dt = -k_off c_A + R k_on c(L).

#include <cstddef>
#include <optional>
#include <vector>

#include "mcloop/boundary.hpp"
#include "mcloop/diffusion.hpp"

namespace mcloop {

// c0(t) = offset + amplitude cos(omega t). The offset defaults to the
// amplitude so the drive never goes negative.
struct Drive {
  double amplitude = 1.0;  // uM
  double omega = 1e-2;     // rad/s
  std::optional<double> offset;

  double offset_value() const noexcept { return offset.value_or(amplitude); }
  double period() const;
};

struct SimConfig {
  explicit SimConfig(DiffusionChannel ch) : channel(ch) {}

  DiffusionChannel channel;  // must be Dirichlet at 0, Neumann at L
  TransmembraneParams membrane;
  LigandReceptorParams receptor;
  // 0 selects max(51, L / 1 um + 1) nodes.
  std::size_t n_cells = 0;
  double cfl = 0.25;
  Drive drive;
  // 0 selects max(8 periods, 5 L^2 / mu).
  double duration = 0.0;
  // Steps between recorded samples; 0 selects about 400 samples per period.
  std::size_t record_stride = 0;
  // Recorded samples between field snapshots; 0 selects about 64 snapshots.
  std::size_t snapshot_every = 0;
  // Optional initial field (n_cells values) and bound receptor state.
  std::vector<double> initial_field;
  double initial_bound = 0.0;
};

struct SimResult {
  double dx = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  double drive_amplitude = 0.0;
  double drive_omega = 0.0;

  std::vector<double> times;
  std::vector<double> drive;  // c0(t)
  std::vector<double> c_out;  // node 0
  std::vector<double> z_L;    // c(t, L)
  std::vector<double> y_L;    // k_re c_A
  std::vector<double> c_A;
  // dr c_out + trapezoid integral of the medium + c_A
  std::vector<double> mass;

  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> c_field;
};

// Resolved values of the automatic SimConfig fields.
std::size_t resolved_cells(const SimConfig& cfg);
double resolved_duration(const SimConfig& cfg);

// Throws Error(ConfigError) for invalid settings and Error(Unstable) if any
// recorded value exceeds 1e6 times the drive scale.
SimResult simulate(const SimConfig& cfg);

struct SinusoidFit {
  double amplitude = 0.0;
  double phase = 0.0;  // of a cos(wt) + b sin(wt) = amplitude cos(wt - phase)
  double offset = 0.0;
};

// Least-squares fit of a cos(wt) + b sin(wt) + c to samples with t >= t_from.
SinusoidFit fit_sinusoid(const std::vector<double>& times, const std::vector<double>& values,
                         double omega, double t_from);

struct EmpiricalGain {
  double gain_db = 0.0;
  double ratio = 0.0;  // output amplitude / input amplitude
  double amplitude_out = 0.0;
  double phase = 0.0;
  // max/min - 1 of per-period amplitudes over the last three periods
  double drift = 0.0;
};

// Gain of z_L against the drive over the final three periods. Throws
// Error(NotSettled) if fewer than three periods were recorded or the
// per-period amplitudes differ by 1 % or more, and Error(InvalidParam) for a
// zero-amplitude drive.
EmpiricalGain empirical_gain(const SimResult& res, double drive_omega);

}  // namespace mcloop
