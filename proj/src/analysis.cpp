#include "mcloop/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "mcloop/errors.hpp"

namespace mcloop {

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (n == 0 || !(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi) || (n > 1 && !(hi > lo))) {
    throw Error(ErrorKind::InvalidParam, "log grid needs 0 < lo < hi and n >= 1");
  }
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = lo;
    return grid;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

double gain_db(cplx value) { return 20.0 * std::log10(std::abs(value)); }

namespace {

cplx evaluate_at(const FrequencyFunction& tf, double omega) {
  cplx value;
  try {
    value = tf(ComplexFreq::jw(omega));
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << e.what() << " (at omega = " << omega << " rad/s)";
    throw Error(e.kind(), msg.str());
  }
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    std::ostringstream msg;
    msg << "non-finite response at omega = " << omega << " rad/s";
    throw Error(ErrorKind::NonFinite, msg.str());
  }
  return value;
}

}  // namespace

GainCurve sweep(const FrequencyFunction& tf, const std::vector<double>& grid, unsigned jobs) {
  if (grid.empty()) throw Error(ErrorKind::InvalidParam, "sweep grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error(ErrorKind::InvalidParam, "sweep grid must be strictly ascending");
    }
  }

  GainCurve curve;
  curve.omegas = grid;
  curve.values.resize(grid.size());

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, grid.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) curve.values[i] = evaluate_at(tf, grid[i]);
  } else {
    std::vector<std::exception_ptr> failures(workers);
    {
      std::vector<std::jthread> threads;
      const std::size_t chunk = (grid.size() + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
          const std::size_t begin = w * chunk;
          const std::size_t end = std::min(grid.size(), begin + chunk);
          try {
            for (std::size_t i = begin; i < end; ++i) curve.values[i] = evaluate_at(tf, grid[i]);
          } catch (...) {
            failures[w] = std::current_exception();
          }
        });
      }
    }
    // Lowest-frequency failure wins so the report does not depend on timing.
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  curve.gain_db.reserve(grid.size());
  curve.phase_rad.reserve(grid.size());
  for (const cplx& v : curve.values) {
    curve.gain_db.push_back(gain_db(v));
    curve.phase_rad.push_back(std::arg(v));
  }
  return curve;
}

FrequencyFunction diffusion_entry(const DiffusionChannel& channel, Side source, Side target) {
  const int row = target == Side::Origin ? 0 : 1;
  const int col = source == Side::Origin ? 0 : 1;
  return [channel, row, col](ComplexFreq s) { return eval_G_matrix(channel, s)(row, col); };
}

std::string_view to_string(CutoffReference ref) noexcept {
  return ref == CutoffReference::Absolute ? "absolute" : "from_steady";
}

CutoffResult cutoff_frequency(const FrequencyFunction& tf, const CutoffOptions& options) {
  if (!(options.omega_scale > 0.0)) {
    throw Error(ErrorKind::InvalidParam, "cut-off search needs a positive frequency scale");
  }
  const double scale = options.omega_scale;
  auto level = [&](double omega) { return gain_db(evaluate_at(tf, omega)); };

  CutoffResult result;
  result.reference = options.reference;
  result.target_db = options.level_db;
  if (options.reference == CutoffReference::FromSteady) {
    const double g_low = level(kSteadyOmega * scale);
    const double g_higher = level(1e-10 * scale);
    if (!std::isfinite(g_low) || std::abs(g_low - g_higher) > 0.01) {
      throw Error(ErrorKind::NoCrossing,
                  "steady gain is not finite, so no level relative to it exists");
    }
    result.steady_gain_db = g_low;
    result.target_db = g_low + options.level_db;
  }
  const double target = result.target_db;

  double lo = 1e-8 * scale;
  double hi = 1e4 * scale;
  for (int i = 0; level(lo) <= target; ++i) {
    if (i == options.max_expansions) {
      throw Error(ErrorKind::NoCrossing, "gain never rises above the target level");
    }
    lo /= options.expansion_factor;
  }
  for (int i = 0; level(hi) >= target; ++i) {
    if (i == options.max_expansions) {
      throw Error(ErrorKind::NoCrossing, "gain never falls below the target level");
    }
    hi *= options.expansion_factor;
  }

  double mid = std::sqrt(lo * hi);
  double g_mid = level(mid);
  int iterations = 0;
  while (iterations < 400) {
    if (hi / lo - 1.0 < options.rel_tol && std::abs(g_mid - target) < options.db_tol) break;
    if (g_mid > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    mid = std::sqrt(lo * hi);
    g_mid = level(mid);
    ++iterations;
  }
  result.omega_c = mid;
  result.omega_hat = mid / scale;
  result.gain_at_cutoff_db = g_mid;
  result.iterations = iterations;
  return result;
}

double normalized_cutoff(BoundaryKind b0, BoundaryKind bL, CutoffReference reference) {
  const DiffusionChannel unit(1.0, 1.0, b0, bL);
  CutoffOptions options;
  options.reference = reference;
  return cutoff_frequency(diffusion_entry(unit, Side::Origin, Side::Far), options).omega_hat;
}

double tanh_gain_approx(double omega, double L, double mu) {
  if (!(omega >= 0.0)) throw Error(ErrorKind::InvalidParam, "omega must be nonnegative");
  const double corner = mu / (L * L);
  const double rising = L / std::sqrt(mu) * std::sqrt(omega);
  if (omega < corner) return rising;
  if (omega > corner) return 1.0;
  return std::max(rising, 1.0);
}

double alpha_max_gain(double k, double mu, double L, double dr) {
  if (!(k > 0.0 && mu > 0.0 && L > 0.0 && dr > 0.0)) {
    throw Error(ErrorKind::InvalidParam, "alpha needs positive k, mu, L and dr");
  }
  const double corner = mu / (L * L);
  const double fast = std::sqrt(mu) / (std::sqrt(k) * dr);
  const double slow = L / dr;
  if (k > corner) return fast;
  if (k < corner) return slow;
  return std::max(fast, slow);
}

// |k / (j w + k)| = 1/2  <=>  w = sqrt(3) k
double first_order_cutoff(double k) { return std::sqrt(3.0) * k; }

bool DesignReport::all_passed() const noexcept {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.passed; });
}

DesignReport design_check(const DesignSpec& spec) {
  if (!(spec.band_hi > 0.0)) throw Error(ErrorKind::InvalidParam, "band_hi must be positive");
  if (!(spec.L_min > 0.0) || !(spec.L_min <= spec.L_max)) {
    throw Error(ErrorKind::InvalidParam, "need 0 < L_min <= L_max");
  }
  if (!(spec.dr > 0.0)) throw Error(ErrorKind::InvalidParam, "dr must be positive");

  const double omega_hat_c = normalized_cutoff(BoundaryKind::Dirichlet, BoundaryKind::Neumann);
  DesignReport report;

  // (i) omega_D = omega_hat_c mu / L^2 >= band_hi at the longest distance.
  {
    ConditionResult c;
    c.id = "i";
    c.description = "diffusion cut-off covers the control band at L_max";
    c.value = spec.mu;
    c.threshold = spec.band_hi * spec.L_max * spec.L_max / omega_hat_c;
    c.relation = ">=";
    c.passed = spec.mu >= c.threshold;
    report.conditions.push_back(c);
  }
  // (ii) omega_H0 = sqrt(3) k >= band_hi.
  {
    ConditionResult c;
    c.id = "ii";
    c.description = "membrane transport cut-off covers the control band";
    c.value = spec.k;
    c.threshold = spec.band_hi / std::sqrt(3.0);
    c.relation = ">=";
    c.passed = spec.k >= c.threshold;
    report.conditions.push_back(c);
  }

  const bool rates_valid = spec.k > 0.0 && spec.mu > 0.0;
  report.omega_D = omega_hat_c * spec.mu / (spec.L_max * spec.L_max);
  report.omega_H0 = first_order_cutoff(spec.k);

  // (iii) alpha <= 1; alpha is piecewise in L, so its maximum over
  // [L_min, L_max] sits at an end point.
  {
    ConditionResult c;
    c.id = "iii";
    c.description = "self-interference peak gain alpha stays at or below one";
    c.threshold = 1.0;
    c.relation = "<=";
    if (rates_valid) {
      report.alpha = std::max(alpha_max_gain(spec.k, spec.mu, spec.L_min, spec.dr),
                              alpha_max_gain(spec.k, spec.mu, spec.L_max, spec.dr));
      c.value = report.alpha;
      c.passed = report.alpha <= 1.0;
    } else {
      report.alpha = c.value = std::numeric_limits<double>::infinity();
    }
    report.conditions.push_back(c);
  }
  // (iv) k_off >= margin * sqrt(3) * omega_M, with omega_M the narrower of
  // the channel band at L_max and the membrane band.
  {
    ConditionResult c;
    c.id = "iv";
    c.description = "receptor desorption rate well above sqrt(3) omega_M";
    report.omega_M = std::min(report.omega_D, report.omega_H0);
    c.value = spec.k_off;
    c.threshold = spec.koff_margin * std::sqrt(3.0) * report.omega_M;
    c.relation = ">=";
    c.passed = spec.k_off > 0.0 && spec.k_off >= c.threshold;
    report.conditions.push_back(c);
  }
  return report;
}

namespace {

// Sum of sign * x^n / n! over n = first, first + step, ... until the terms
// stop contributing.
double taylor_tail(double x, int first, int step) {
  double term = 1.0;
  for (int n = 1; n <= first; ++n) term *= x / n;
  double sum = 0.0;
  for (int n = first; n < first + 40 * step; n += step) {
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    for (int m = n + 1; m <= n + step; ++m) term *= x / m;
  }
  return sum;
}

}  // namespace

double f_plus(double x) { return std::exp(x) - std::exp(-x) + 2.0 * std::sin(x); }

double f_minus(double x) {
  // 4 (x^3/3! + x^7/7! + ...) avoids the cancellation near zero.
  if (std::abs(x) < 1.0) return 4.0 * taylor_tail(x, 3, 4);
  return std::exp(x) - std::exp(-x) - 2.0 * std::sin(x);
}

double c_minus(double x) {
  if (std::abs(x) < 1.0) return 4.0 * taylor_tail(x, 2, 4);
  return std::exp(x) + std::exp(-x) - 2.0 * std::cos(x);
}

double h_dd(double x) {
  if (std::abs(x) <= 4.0) {
    // h(x) = -16 sum_{j>=1} j x^(4j+2) / (4j+2)!
    double term = 1.0;
    for (int n = 1; n <= 6; ++n) term *= x / n;
    double sum = 0.0;
    for (int j = 1; j < 60; ++j) {
      const double piece = j * term;
      sum += piece;
      if (piece <= 1e-18 * sum) break;
      const int n = 4 * j + 2;
      for (int m = n + 1; m <= n + 4; ++m) term *= x / m;
    }
    return -16.0 * sum;
  }
  return 2.0 * c_minus(x) - x * f_plus(x);
}

std::optional<std::size_t> first_non_decreasing(const DiffusionChannel& channel,
                                                const std::vector<double>& omegas) {
  const auto entry = diffusion_entry(channel, Side::Origin, Side::Far);
  double previous = std::abs(entry(ComplexFreq::jw(omegas.front())));
  for (std::size_t i = 1; i < omegas.size(); ++i) {
    const double current = std::abs(entry(ComplexFreq::jw(omegas[i])));
    if (!(current < previous)) return i - 1;
    previous = current;
  }
  return std::nullopt;
}

PropertyReport property_suite(const std::vector<double>& x_grid, double L, double mu) {
  if (x_grid.empty()) throw Error(ErrorKind::InvalidParam, "property grid is empty");
  auto violation = [](const char* what, double x) {
    std::ostringstream msg;
    msg << what << " at x = " << x;
    return Error(ErrorKind::PropertyViolation, msg.str());
  };

  PropertyReport report;
  report.points = x_grid.size();
  report.min_f_plus = report.min_f_minus = report.min_c_minus =
      std::numeric_limits<double>::infinity();
  report.max_h = -std::numeric_limits<double>::infinity();
  for (double x : x_grid) {
    if (!(x >= 0.0)) throw Error(ErrorKind::InvalidParam, "property grid must be nonnegative");
    const double fp = f_plus(x);
    const double fm = f_minus(x);
    const double cm = c_minus(x);
    const double h = h_dd(x);
    if (fp < 0.0) throw violation("f+ < 0", x);
    if (fm < 0.0) throw violation("f- < 0", x);
    if (cm < 0.0) throw violation("c- < 0", x);
    if (h > 0.0) throw violation("h > 0", x);
    report.min_f_plus = std::min(report.min_f_plus, fp);
    report.min_f_minus = std::min(report.min_f_minus, fm);
    report.min_c_minus = std::min(report.min_c_minus, cm);
    report.max_h = std::max(report.max_h, h);
  }

  // x = sqrt(2) L sqrt(omega) / sqrt(mu)  =>  omega = x^2 mu / (2 L^2)
  std::vector<double> omegas;
  std::vector<double> xs;
  for (double x : x_grid) {
    if (x > 0.0) {
      omegas.push_back(x * x * mu / (2.0 * L * L));
      xs.push_back(x);
    }
  }
  report.min_gain_drop = std::numeric_limits<double>::infinity();
  for (BoundaryKind b0 : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
    for (BoundaryKind bL : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
      const DiffusionChannel channel(mu, L, b0, bL);
      const auto entry = diffusion_entry(channel, Side::Origin, Side::Far);
      double previous = 0.0;
      for (std::size_t i = 0; i < omegas.size(); ++i) {
        const double current = std::abs(entry(ComplexFreq::jw(omegas[i])));
        if (i > 0) {
          if (!(current < previous)) {
            throw violation(
                (std::string("|G21| of ") + std::string(boundary_tag(b0, bL)) +
                 " does not decrease")
                    .c_str(),
                xs[i]);
          }
          report.min_gain_drop = std::min(report.min_gain_drop, previous / current - 1.0);
        }
        previous = current;
      }
    }
  }
  return report;
}

}  // namespace mcloop
