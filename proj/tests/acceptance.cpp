// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Tolerances are fixed here, not read from anywhere.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mcloop/analysis.hpp"
#include "mcloop/errors.hpp"
#include "mcloop/fdm.hpp"
#include "mcloop/feedback.hpp"

using namespace mcloop;

namespace {

constexpr auto D = BoundaryKind::Dirichlet;
constexpr auto N = BoundaryKind::Neumann;
constexpr double kMu = 83.0;

// Pinned tolerances.
constexpr double kCutoffRelTol = 0.01;
constexpr double kSteadyGainTolDb = 0.01;
constexpr double kEquivalenceRelTol = 1e-9;
constexpr double kMuThresholdTol = 0.1;
constexpr double kKThresholdRelTol = 0.01;
constexpr double kOracleTolDb = 0.5;
constexpr double kApproxRelTol = 0.01;
constexpr double kOmegaMRelTol = 0.01;
constexpr double kGridTolDb = 0.1;
constexpr double kLinearityRelTol = 1e-3;
constexpr double kMassRelTol = 1e-6;

struct Verdict {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    passed = passed && ok;
    detail << (ok ? "" : "[x] ") << what << "; ";
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

bool within_rel(double x, double want, double tol) { return std::abs(x - want) <= tol * std::abs(want); }

Interconnection section_loop(double k, double L) {
  return Interconnection(DiffusionChannel(kMu, L, D, N), make_transmembrane({k, kMu, 1.0}),
                         make_ligand_receptor({0.1, 100.0, 1.0, 1000.0, kMu}));
}

SimConfig sim(double L, double omega) {
  SimConfig cfg(DiffusionChannel(kMu, L, D, N));
  cfg.membrane = {200.0, kMu, 1.0};
  cfg.receptor = {0.1, 100.0, 1.0, 1000.0, kMu};
  cfg.drive.omega = omega;
  return cfg;
}

void criterion_1(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const double dn = normalized_cutoff(D, N);
  const double nd = normalized_cutoff(N, D);
  const double dd = normalized_cutoff(D, D, CutoffReference::FromSteady);
  v.require(within_rel(dn, 4.14, kCutoffRelTol), "dn omega_hat " + num(dn) + " vs 4.14");
  v.require(within_rel(nd, 4.14, kCutoffRelTol), "nd omega_hat " + num(nd) + " vs 4.14");
  v.require(within_rel(dd, 15.0, kCutoffRelTol), "dd from-steady omega_hat " + num(dd) + " vs 15.0");
  for (double L : {10.0, 100.0}) {
    const DiffusionChannel ch(kMu, L, D, D);
    const double w = 1e-12 * kMu / (L * L);
    const double g = gain_db(eval_G_matrix(ch, ComplexFreq::jw(w))(1, 0));
    const double want = 20.0 * std::log10(1.0 / L);
    v.require(std::abs(g - want) <= kSteadyGainTolDb,
              "dd steady gain at L=" + num(L) + ": " + num(g) + " dB vs " + num(want));
  }
  const double t = seconds_since(t0);
  v.require(t < 1.0, "runtime " + num(t) + " s < 1 s");
}

void criterion_2(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::array<std::pair<BoundaryKind, BoundaryKind>, 4> pairs{{{D, D}, {D, N}, {N, D}, {N, N}}};
  constexpr std::array<Side, 2> sides{Side::Origin, Side::Far};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> log_w(-6.0, 2.0), log_L(0.0, 3.0), log_mu(0.0, 3.0);
  double worst = 0.0;
  int entries = 0;
  for (int i = 0; i < 200; ++i) {
    const auto [b0, bL] = pairs[i % 4];
    const DiffusionChannel ch(std::pow(10.0, log_mu(rng)), std::pow(10.0, log_L(rng)), b0, bL);
    const ComplexFreq s = ComplexFreq::jw(std::pow(10.0, log_w(rng)));
    const Matrix2c G = eval_G_matrix(ch, s);
    for (int row = 0; row < 2; ++row) {
      for (int col = 0; col < 2; ++col) {
        const cplx general = eval_G_entry(ch, s, sides[col], sides[row]);
        worst = std::max(worst, std::abs(general - G(row, col)) / std::abs(G(row, col)));
        ++entries;
      }
    }
  }
  v.require(worst < kEquivalenceRelTol,
            "max relative error " + num(worst) + " over " + std::to_string(entries) + " entries");
  const double t = seconds_since(t0);
  v.require(t < 1.0, "runtime " + num(t) + " s < 1 s");
}

void criterion_3(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto omegas = log_grid(1e-6, 1e2, 10000);
  for (auto [b0, bL] : std::array<std::pair<BoundaryKind, BoundaryKind>, 4>{{{D, D}, {D, N}, {N, D}, {N, N}}}) {
    const auto bad = first_non_decreasing(DiffusionChannel(kMu, 100.0, b0, bL), omegas);
    v.require(!bad.has_value(), std::string("|G21| ") + std::string(boundary_tag(b0, bL)) +
                                    (bad ? " rises at omega " + num(omegas[*bad]) : " strictly decreasing"));
  }
  std::vector<double> x(10000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 50.0 * static_cast<double>(i) / (x.size() - 1);
  try {
    const PropertyReport r = property_suite(x);
    v.require(r.min_f_plus >= 0.0 && r.min_f_minus >= 0.0,
              "min f+ " + num(r.min_f_plus) + ", min f- " + num(r.min_f_minus));
    v.require(r.max_h <= 0.0, "max h " + num(r.max_h));
  } catch (const Error& e) {
    v.require(false, e.what());
  }
  const double t = seconds_since(t0);
  v.require(t < 5.0, "runtime " + num(t) + " s < 5 s");
}

void criterion_4(Verdict& v) {
  DesignSpec spec;
  spec.band_hi = 1e-2;
  spec.L_max = 100.0;
  spec.mu = kMu;
  spec.k = 200.0;
  spec.k_off = 100.0;
  const DesignReport r = design_check(spec);
  const double mu_t = r.conditions[0].threshold;
  const double k_t = r.conditions[1].threshold;
  v.require(std::abs(mu_t - 24.2) <= kMuThresholdTol, "mu threshold " + num(mu_t) + " vs 24.2");
  v.require(within_rel(k_t, 5.77e-3, kKThresholdRelTol), "k threshold " + num(k_t) + " vs 5.77e-3");
}

void criterion_5(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  auto min_gain_db = [](const Interconnection& ic, const std::vector<double>& grid) {
    double m = INFINITY;
    for (double w : grid) m = std::min(m, gain_db(channel_gamma(ic, ComplexFreq::jw(w)).gamma_0L));
    return m;
  };
  auto min_s0 = [](const Interconnection& ic, const std::vector<double>& grid) {
    double m = INFINITY;
    for (double w : grid) m = std::min(m, std::abs(self_interference(ic, ComplexFreq::jw(w), Side::Origin)));
    return m;
  };
  const Interconnection slow = section_loop(5e-2, 100.0);
  const Interconnection fast = section_loop(200.0, 100.0);
  const double slow_gain = min_gain_db(slow, log_grid(1e-3, 1e-2, 400));
  const double slow_s0 = min_s0(slow, log_grid(1e-3, 1e1, 800));
  const double fast_gain = min_gain_db(fast, log_grid(1e-12, 1e-2, 1000));
  const double fast_s0 = min_s0(fast, log_grid(1e-6, 1e3, 1000));
  v.require(slow_gain < -6.0, "k=5e-2: min |Gamma0L| on [1e-3,1e-2] = " + num(slow_gain) + " dB < -6");
  v.require(slow_s0 < 0.3, "k=5e-2: min |S0| on [1e-3,1e1] = " + num(slow_s0) + " < 0.3");
  v.require(fast_gain > -6.0, "k=200: min |Gamma0L| on (0,1e-2] = " + num(fast_gain) + " dB > -6");
  v.require(fast_s0 >= 0.45, "k=200: min |S0| = " + num(fast_s0) + " >= 0.45");
  const double t = seconds_since(t0);
  v.require(t < 2.0, "runtime " + num(t) + " s < 2 s");
}

void criterion_6(Verdict& v) {
  struct Point {
    double L, w;
  };
  std::vector<Point> points;
  for (double L : {50.0, 100.0}) {
    for (double w : {1e-3, 1e-2, 1e-1}) points.push_back({L, w});
  }
  std::vector<std::future<EmpiricalGain>> runs;
  for (const auto& p : points) {
    runs.push_back(std::async(std::launch::async, [p] { return empirical_gain(simulate(sim(p.L, p.w)), p.w); }));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    try {
      const EmpiricalGain g = runs[i].get();
      const double want = gain_db(channel_gamma(section_loop(200.0, p.L), ComplexFreq::jw(p.w)).gamma_0L);
      v.require(std::abs(g.gain_db - want) <= kOracleTolDb,
                "L=" + num(p.L) + " w=" + num(p.w) + ": fdm " + num(g.gain_db) + " dB, analytic " +
                    num(want) + " dB");
      if (p.L == 100.0 && p.w == 1e-2) v.require(g.ratio >= 0.9, "ratio at w=1e-2, L=100: " + num(g.ratio) + " >= 0.9");
      if (p.L == 100.0 && p.w == 1e-1) v.require(g.ratio < 0.25, "ratio at w=1e-1, L=100: " + num(g.ratio) + " < 0.25");
    } catch (const Error& e) {
      v.require(false, "L=" + num(p.L) + " w=" + num(p.w) + ": " + e.what());
    }
  }
}

void criterion_7(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const Interconnection ic = section_loop(200.0, 100.0);
  double worst = 0.0, worst_w = 0.0;
  for (double w : log_grid(1e-4, 1e2, 1000)) {
    const ChannelResponse r = respond(ic, ComplexFreq::jw(w));
    const double dev = std::abs(r.M0L_exact - r.M0L_approx) / std::abs(r.M0L_exact);
    if (dev > worst) {
      worst = dev;
      worst_w = w;
    }
  }
  v.require(worst < kApproxRelTol,
            "max |M0L_exact - HL21 Gamma0L| / |M0L_exact| = " + num(worst) + " at w=" + num(worst_w));
  DesignSpec spec;
  spec.mu = kMu;
  spec.k = 200.0;
  spec.k_off = 100.0;
  const double omega_M = design_check(spec).omega_M;
  v.require(within_rel(omega_M, 3.44e-2, kOmegaMRelTol), "omega_M " + num(omega_M) + " vs 3.44e-2");
  const double t = seconds_since(t0);
  v.require(t < 2.0, "runtime " + num(t) + " s < 2 s");
}

void criterion_8(Verdict& v) {
  auto grid = std::async(std::launch::async, [] {
    SimConfig coarse = sim(100.0, 1e-2);
    coarse.n_cells = 101;
    SimConfig fine = coarse;
    fine.n_cells = 201;
    return std::abs(empirical_gain(simulate(fine), 1e-2).gain_db -
                    empirical_gain(simulate(coarse), 1e-2).gain_db);
  });
  auto linear = std::async(std::launch::async, [] {
    SimConfig one = sim(50.0, 1e-1);
    SimConfig two = one;
    two.drive.amplitude = 2.0;
    const double a1 = empirical_gain(simulate(one), 1e-1).amplitude_out;
    const double a2 = empirical_gain(simulate(two), 1e-1).amplitude_out;
    return std::abs(a2 / (2.0 * a1) - 1.0);
  });
  auto mass = std::async(std::launch::async, [] {
    SimConfig cfg = sim(100.0, 1e-1);
    cfg.membrane.k = 0.0;
    cfg.receptor = {0.0, 0.0, 0.0, 0.0, kMu};
    const std::size_t n = resolved_cells(cfg);
    cfg.initial_field.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = 100.0 * static_cast<double>(i) / (n - 1);
      cfg.initial_field[i] = std::exp(-(r - 30.0) * (r - 30.0) / 50.0);
    }
    const SimResult res = simulate(cfg);
    double drift = 0.0;
    for (double m : res.mass) drift = std::max(drift, std::abs(m / res.mass.front() - 1.0));
    return drift;
  });
  const double dg = grid.get(), lin = linear.get(), dm = mass.get();
  v.require(dg < kGridTolDb, "grid halving moves gain by " + num(dg) + " dB");
  v.require(lin < kLinearityRelTol, "linearity error " + num(lin));
  v.require(dm < kMassRelTol, "sealed-pipe mass drift " + num(dm));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"normalized cut-off constants and dd steady gain", criterion_1},
      {"general formula equals closed forms", criterion_2},
      {"monotone gains and sign properties", criterion_3},
      {"design thresholds recomputed", criterion_4},
      {"membrane rate sets band and self-interference", criterion_5},
      {"finite-difference oracle agreement", criterion_6},
      {"entire-channel approximation and omega_M", criterion_7},
      {"finite-difference self-checks", criterion_8},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("unexpected error: ") + e.what());
    }
    std::printf("[%zu] %s  %s (%.2f s): %s\n", i + 1, v.passed ? "PASS" : "FAIL",
                criteria[i].first.c_str(), seconds_since(t0), v.detail.str().c_str());
    std::fflush(stdout);
    failures += v.passed ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
