#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcloop/diffusion.hpp"

namespace mcloop {

using FrequencyFunction = std::function<cplx(ComplexFreq)>;

struct GainCurve {
  std::vector<double> omegas;  // rad/s, strictly ascending
  std::vector<cplx> values;
  std::vector<double> gain_db;
  std::vector<double> phase_rad;

  std::size_t size() const noexcept { return omegas.size(); }
};

// n log-spaced points from lo to hi inclusive. Throws Error(InvalidParam)
// unless 0 < lo <= hi and n >= 1 (lo < hi when n > 1).
std::vector<double> log_grid(double lo, double hi, std::size_t n);

// Evaluates tf at s = j*omega over an ascending grid. Errors from tf are
// rethrown with the offending omega in the message; a non-finite sample
// raises Error(NonFinite). Chunks run on up to `jobs` threads.
GainCurve sweep(const FrequencyFunction& tf, const std::vector<double>& grid,
                unsigned jobs = 1);

double gain_db(cplx value);

// Entry (target <- source) of the closed-form diffusion matrix as a
// frequency function.
FrequencyFunction diffusion_entry(const DiffusionChannel& channel, Side source, Side target);

enum class CutoffReference { Absolute, FromSteady };

std::string_view to_string(CutoffReference ref) noexcept;

struct CutoffOptions {
  CutoffReference reference = CutoffReference::Absolute;
  // Absolute: target level in dB. FromSteady: offset added to the steady
  // gain, so -6 means 6 dB below it.
  double level_db = -6.0;
  // Frequency scale mu/L^2; the bracket starts at [1e-8, 1e4] * scale and
  // omega_hat = omega / scale.
  double omega_scale = 1.0;
  double rel_tol = 1e-6;
  double db_tol = 1e-4;
  int max_expansions = 4;
  double expansion_factor = 100.0;
};

struct CutoffResult {
  double omega_c = 0.0;
  double omega_hat = 0.0;
  CutoffReference reference = CutoffReference::Absolute;
  double target_db = 0.0;
  double gain_at_cutoff_db = 0.0;
  std::optional<double> steady_gain_db;
  int iterations = 0;
};

// First downward crossing of the target level by bisection in log(omega).
// Assumes a gain that decreases monotonically in omega. Throws
// Error(NoCrossing) when the bracket cannot be established or, in
// FromSteady mode, when the low-frequency gain does not settle to a finite
// value.
CutoffResult cutoff_frequency(const FrequencyFunction& tf, const CutoffOptions& options);

// Normalized -6 dB cut-off L^2 omega / mu of the (2,1) diffusion entry for a
// boundary pair, found on a unit channel.
double normalized_cutoff(BoundaryKind b0, BoundaryKind bL,
                         CutoffReference reference = CutoffReference::Absolute);

// Piecewise approximation of |tanh((L/sqrt(mu)) sqrt(j omega))|:
// (L/sqrt(mu)) sqrt(omega) below mu/L^2, one above, the larger at the corner.
double tanh_gain_approx(double omega, double L, double mu);

// Approximate peak of |H0_11 G11| for the transmembrane/dn pair:
// sqrt(mu)/(sqrt(k) dr) for k above mu/L^2, L/dr below, the larger at the
// corner.
double alpha_max_gain(double k, double mu, double L, double dr);

// Half-amplitude cut-off of the first-order lag k/(s + k).
double first_order_cutoff(double k);

struct DesignSpec {
  double band_hi = 1e-2;  // rad/s
  double L_min = 10.0;    // um
  double L_max = 100.0;   // um
  double dr = 1.0;        // um
  double mu = 0.0;
  double k = 0.0;
  double k_off = 0.0;
  double k_on = 0.0;
  double k_re = 0.0;
  double R = 0.0;
  // Factor standing in for "much greater than" in the receptor condition.
  double koff_margin = 10.0;
};

struct ConditionResult {
  std::string id;           // "i", "ii", "iii", "iv"
  std::string description;
  bool passed = false;
  double value = 0.0;       // the designed quantity
  double threshold = 0.0;   // bound it is compared against
  std::string relation;     // ">=" or "<="
};

struct DesignReport {
  std::vector<ConditionResult> conditions;
  double omega_D = 0.0;   // at L_max
  double omega_H0 = 0.0;
  double omega_M = 0.0;   // min(omega_D, omega_H0)
  double alpha = 0.0;

  bool all_passed() const noexcept;
};

// Throws Error(InvalidParam) only for a malformed spec (band_hi <= 0,
// L_min > L_max, nonpositive lengths); failing conditions are reported.
DesignReport design_check(const DesignSpec& spec);

// Functions used to prove monotone gain; x is the scaled frequency
// sqrt(2) L sqrt(omega) / sqrt(mu).
double f_plus(double x);   // e^x - e^-x + 2 sin x
double f_minus(double x);  // e^x - e^-x - 2 sin x
double c_minus(double x);  // e^x + e^-x - 2 cos x
double h_dd(double x);     // 2 c_minus(x) - x f_plus(x)

struct PropertyReport {
  double min_f_plus = 0.0;
  double min_f_minus = 0.0;
  double min_c_minus = 0.0;
  double max_h = 0.0;
  // Smallest relative step |G21(x_i)| / |G21(x_{i+1})| - 1 over the four
  // boundary pairs.
  double min_gain_drop = 0.0;
  std::size_t points = 0;
};

// Checks f+ >= 0, f- >= 0, c- >= 0, h <= 0 on `x_grid` and that |G21| of all
// four boundary pairs strictly decreases along it (x = 0 is skipped for the
// gains). Throws Error(PropertyViolation) naming the offending x.
PropertyReport property_suite(const std::vector<double>& x_grid, double L = 100.0,
                                       double mu = 83.0);

// Index i of the first grid step where |G21| fails to strictly decrease.
std::optional<std::size_t> first_non_decreasing(const DiffusionChannel& channel,
                                                const std::vector<double>& omegas);

}  // namespace mcloop
