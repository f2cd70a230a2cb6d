// Copyright 2026 The cavitycz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cavitycz/cavitycz.hpp"
#include "cli_app.hpp"

using namespace cavitycz;

namespace {

// Pinned tolerances.
constexpr double kBareFidelityFloor = 0.995;
constexpr double kCriterion1Seconds = 10.0;
constexpr double kPhaseTolerance = 1e-3;
constexpr double kFluxTolerance = 1e-6;
constexpr double kAdiabaticRelative = 0.01;
constexpr double kAdiabaticT_f = 500.0;
constexpr double kSpreadRelative = 0.05;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kOracleTolerance = 1e-10;
constexpr double kUnitTolerance = 1e-12;
constexpr double kTwoSidedTolerance = 1e-8;
constexpr double kRecoveryTolerance = 1e-10;
constexpr double kGrowthSigmas = 3.0;
constexpr double kCriterion9Seconds = 30.0;
constexpr double kStepHalvingTolerance = 1e-6;
constexpr int kFig3Phases = 16;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) { return format_number(v); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Battery {
  double worst_flux = 0.0;
  std::string worst_flux_at;
  int runs = 0;

  void track(double residual, const std::string& where) {
    ++runs;
    if (std::abs(residual) > worst_flux) {
      worst_flux = std::abs(residual);
      worst_flux_at = where;
    }
  }
};

Battery battery;

ReflectionRecord run(const CavityParams& p, double T_f, ReflectionCase which, GridSettings grid = {}) {
  const auto pulse = make_sech_pulse(T_f, make_grid(p, T_f, grid));
  auto rec = reflect(p, pulse, which);
  battery.track(rec.flux_residual(), to_string(which) + " T_f=" + num(T_f) + " kappa_l=" + num(p.kappa_l) +
                                         " g0=" + num(p.g0) + " phi=" + num(p.phi));
  return rec;
}

// fig3 point: phi-averaged metrics plus per-phi extremes; envelopes dropped.
struct Fig3Point {
  double mean_g = 0.0;
  double kappa_l = 0.0, T_f = 0.0, T_g = 0.0;
  double P = 0.0, F = 0.0, phase = 0.0;
  double worst_phi_phase = 0.0;
};

std::vector<SweepRow> fig2_rows;
std::vector<Fig3Point> fig3_points;

void compute_fig2() {
  fig2_rows = sweep(fig2_spec());
  for (const auto& r : fig2_rows) {
    if (!r.error.empty()) throw NumericalError("fig2 row failed: " + r.error);
    battery.track(1.0 - r.P - r.loss_atom - r.loss_cavity,
                  "fig2 T_f=" + num(r.T_f) + " kappa_l=" + num(r.kappa_l));
  }
}

void compute_fig3() {
  for (double mg : fig3_mean_couplings()) {
    for (double kl : {0.0, 0.2}) {
      for (double tf : {10.0, 50.0}) {
        for (double tg : {50.0, 125.0}) {
          CavityParams p;
          p.g0 = peak_for_mean_coupling(mg);
          p.gamma = 1.0;
          p.kappa_l = kl;
          p.T_g = tg;
          const auto pulse = make_sech_pulse(tf, make_grid(p, tf));
          const auto avg = reflect_coupled_motion_averaged(p, pulse, kFig3Phases);
          Fig3Point pt{mg, kl, tf, tg, avg.P, avg.F, avg.phase, 0.0};
          for (std::size_t k = 0; k < avg.per_phi.size(); ++k) {
            const auto& r = avg.per_phi[k];
            battery.track(r.flux_residual(), "fig3 <g>=" + num(mg) + " kappa_l=" + num(kl) + " T_f=" + num(tf) +
                                                 " T_g=" + num(tg) + " phi=" + num(avg.phis[k]));
            pt.worst_phi_phase = std::max(pt.worst_phi_phase, std::abs(r.phase));
          }
          fig3_points.push_back(pt);
        }
      }
    }
  }
}

Verdict criterion1() {
  const auto t0 = Clock::now();
  double worst = 1.0;
  std::string at;
  for (double tf : {50.0, 70.0}) {
    for (double kl : {0.0, 0.1, 0.2, 0.3}) {
      CavityParams p;
      p.kappa_l = kl;
      const auto rec = run(p, tf, ReflectionCase::kBare);
      if (rec.F < worst) {
        worst = rec.F;
        at = "T_f=" + num(tf) + " kappa_l=" + num(kl);
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst >= kBareFidelityFloor && secs < kCriterion1Seconds,
          "min F0=" + num(worst) + " at " + at + " (floor " + num(kBareFidelityFloor) + "), " + num(secs) +
              " s (limit " + num(kCriterion1Seconds) + " s)"};
}

Verdict criterion2() {
  double bare = 0.0, coupled = 0.0;
  for (const auto& r : fig2_rows) bare = std::max(bare, std::abs(principal_phase(r.phase - std::numbers::pi)));
  for (const auto& pt : fig3_points) coupled = std::max({coupled, std::abs(pt.phase), pt.worst_phi_phase});
  return {bare < kPhaseTolerance && coupled < kPhaseTolerance,
          "max |bare phase - pi|=" + num(bare) + " over " + std::to_string(fig2_rows.size()) +
              " fig2 points, max |coupled phase|=" + num(coupled) + " over " + std::to_string(fig3_points.size()) +
              " fig3 points x " + std::to_string(kFig3Phases) + " phases (tol " + num(kPhaseTolerance) + ")"};
}

Verdict criterion3() {
  for (const auto& c : verify_flux()) battery.track(c.residual, c.name);
  return {battery.worst_flux < kFluxTolerance,
          "max flux residual " + num(battery.worst_flux) + " over " + std::to_string(battery.runs) +
              " solver runs (worst: " + battery.worst_flux_at + "; tol " + num(kFluxTolerance) + ")"};
}

Verdict criterion4() {
  double worst_p0 = 0.0, worst_amp = 0.0;
  for (double kl : {0.0, 0.1, 0.2, 0.3}) {
    CavityParams p;
    p.kappa_l = kl;
    const auto rec = run(p, kAdiabaticT_f, ReflectionCase::kBare);
    const double expected = std::pow((1.0 - kl) / (1.0 + kl), 2);
    worst_p0 = std::max(worst_p0, std::abs(rec.P / expected - 1.0));
  }
  for (double g : {1.0, 2.0, 5.0}) {
    for (double kl : {0.0, 0.2}) {
      CavityParams p;
      p.g0 = g;
      p.gamma = 1.0;
      p.kappa_l = kl;
      p.T_g = 1e9;  // frozen motion
      const auto rec = run(p, kAdiabaticT_f, ReflectionCase::kCoupled);
      const double kappa = 1.0 + kl;
      const double expected = 1.0 - 1.0 / (kappa / 2.0 + g * g / (p.gamma / 2.0));
      worst_amp = std::max(worst_amp, std::abs(rec.amplitude - Complex(expected, 0.0)) / std::abs(expected));
    }
  }
  return {worst_p0 < kAdiabaticRelative && worst_amp < kAdiabaticRelative,
          "T_f=" + num(kAdiabaticT_f) + ": max rel. P0 error " + num(worst_p0) +
              ", max rel. constant-g amplitude error " + num(worst_amp) + " (tol " + num(kAdiabaticRelative) + ")"};
}

Verdict criterion5() {
  std::vector<std::string> problems;
  const auto& spec = fig2_spec();
  const std::size_t nk = spec.kappa_l.size(), nt = spec.T_f.size();
  // rows are ordered kappa_l outer, T_f inner
  auto row = [&](std::size_t k, std::size_t t) -> const SweepRow& { return fig2_rows[k * nt + t]; };
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t k = 1; k < nk; ++k) {
      if (!(row(k, t).P < row(k - 1, t).P)) problems.push_back("P0 not decreasing at T_f=" + num(spec.T_f[t]));
    }
  }
  for (std::size_t k = 0; k < nk; ++k) {
    for (std::size_t t = 1; t < nt; ++t) {
      if (!(row(k, t).F > row(k, t - 1).F)) problems.push_back("F0 not ordered by T_f at kappa_l=" + num(spec.kappa_l[k]));
    }
  }
  const auto& gs = fig3_mean_couplings();
  const std::size_t combos = fig3_points.size() / gs.size();
  for (std::size_t c = 0; c < combos; ++c) {
    for (std::size_t g = 1; g < gs.size(); ++g) {
      const auto& a = fig3_points[(g - 1) * combos + c];
      const auto& b = fig3_points[g * combos + c];
      if (b.P < a.P - kMonotoneSlack || b.F < a.F - kMonotoneSlack) {
        problems.push_back("P1/F1 decrease at <g>=" + num(gs[g]));
      }
    }
  }
  double worst_spread = 0.0;
  std::string worst_at;
  for (std::size_t g = 0; g < gs.size(); ++g) {
    for (int metric = 0; metric < 2; ++metric) {
      double lo = INFINITY, hi = -INFINITY, sum = 0.0;
      for (std::size_t c = 0; c < combos; ++c) {
        const auto& pt = fig3_points[g * combos + c];
        const double v = metric == 0 ? pt.P : pt.F;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
      }
      const double spread = (hi - lo) / (sum / static_cast<double>(combos));
      if (spread >= kSpreadRelative) {
        problems.push_back(std::string(metric == 0 ? "P1" : "F1") + " spread " + num(spread) + " at <g>=" + num(gs[g]));
      }
      if (spread > worst_spread) {
        worst_spread = spread;
        worst_at = std::string(metric == 0 ? "P1" : "F1") + " at <g>=" + num(gs[g]);
      }
    }
  }
  std::string detail = "fig2 monotonicity and ordering, fig3 monotonicity; max fig3 spread " + num(worst_spread) +
                       " (" + worst_at + ", tol " + num(kSpreadRelative) + ")";
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

Verdict from_checks(const std::vector<Check>& checks, const std::string& label) {
  double worst = 0.0;
  std::string at;
  int failed = 0;
  for (const auto& c : checks) {
    if (!c.passed) ++failed;
    if (c.residual / c.tolerance >= worst) {
      worst = c.residual / c.tolerance;
      at = c.name + " residual " + num(c.residual) + " tol " + num(c.tolerance);
    }
  }
  return {failed == 0, label + ": " + std::to_string(checks.size() - static_cast<std::size_t>(failed)) + "/" +
                           std::to_string(checks.size()) + " checks, tightest: " + at};
}

Verdict criterion6() {
  auto checks = verify_oracle(2024, 100);
  for (double P0 : {0.2, 0.55, 1.0}) {
    const auto g = two_cavity_gate(BranchReflectivities::make(P0, 1.0));
    checks.push_back(make_check("r=1 P0=" + num(P0) + " P_total", std::abs(g.P_total - P0 * P0), kUnitTolerance));
    checks.push_back(make_check("r=1 P0=" + num(P0) + " F_avg", std::abs(g.F_avg - 1.0), kUnitTolerance));
  }
  for (const auto& c : checks) {
    if (c.tolerance > kOracleTolerance) return {false, "oracle check looser than pinned tolerance: " + c.name};
  }
  return from_checks(checks, "100 seeded (P0, r) draws vs circuit oracle");
}

Verdict criterion7() {
  const auto checks = verify_two_sided();
  for (const auto& c : checks) {
    if (c.tolerance > kTwoSidedTolerance) return {false, "two-sided check looser than pinned tolerance"};
  }
  return from_checks(checks, "kappa_c'={0.5,1,2} x {bare,coupled}");
}

Verdict criterion8() {
  const auto checks = verify_recovery(7, 20);
  for (const auto& c : checks) {
    if (c.tolerance > kRecoveryTolerance) return {false, "recovery check looser than pinned tolerance"};
  }
  return from_checks(checks, "n=4..10 x 20 bases, splits n=5..10");
}

Verdict criterion9() {
  const auto t0 = Clock::now();
  const auto checks = verify_growth(11, 10000, 200);
  const auto below = monte_carlo_growth(0.65, 10000, 200, 13);
  const auto above = monte_carlo_growth(0.68, 10000, 200, 13);
  const double secs = seconds_since(t0);
  auto v = from_checks(checks, "P={0.5,0.7,0.75,0.9}, m=1e4, 200 trials, z-limit " + num(kGrowthSigmas));
  for (const auto& c : checks) v.pass = v.pass && c.tolerance <= kGrowthSigmas;
  const bool sign = below.mean_delta < 0.0 && above.mean_delta > 0.0;
  v.pass = v.pass && sign && secs < kCriterion9Seconds;
  v.detail += "; mean at P=0.65: " + num(below.mean_delta) + ", at P=0.68: " + num(above.mean_delta) + "; " +
              num(secs) + " s (limit " + num(kCriterion9Seconds) + " s)";
  return v;
}

Verdict criterion10() {
  auto capture = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return std::to_string(code) + "\n" + out.str();
  };
  const std::vector<std::vector<std::string>> commands{
      {"sweep", "--case", "bare", "--kappa-l", "0:0.3:0.1", "--Tf", "10,30"},
      {"sweep", "--case", "coupled", "--g0", "2", "--Tf", "10", "--n-phi", "4"},
      {"cluster", "--P", "0.5,0.7", "--m", "2000", "--trials", "50", "--seed", "3"},
      {"gate", "--P0", "0.9", "--r", "0.7"},
  };
  bool identical = true;
  for (const auto& c : commands) {
    const auto a = capture(c);
    const auto b = capture(c);
    identical = identical && a == b && a.rfind("0\n", 0) == 0;
  }
  double worst = 0.0;
  std::string at;
  struct Case {
    ReflectionCase which;
    double T_f, kappa_l, g0, phi;
  };
  const Case cases[] = {
      {ReflectionCase::kBare, 10.0, 0.0, 0.0, 0.0},     {ReflectionCase::kBare, 50.0, 0.3, 0.0, 0.0},
      {ReflectionCase::kCoupled, 10.0, 0.2, 1.344, 0.3}, {ReflectionCase::kCoupled, 10.0, 0.0, 5.0, 2.0},
      {ReflectionCase::kCoupled, 50.0, 0.2, 3.0, 1.0},
  };
  for (const auto& c : cases) {
    CavityParams p;
    p.kappa_l = c.kappa_l;
    p.g0 = c.g0;
    p.phi = c.phi;
    const double dt = default_dt(p, c.T_f);
    const auto coarse = run(p, c.T_f, c.which, {dt, 8.0});
    const auto fine = run(p, c.T_f, c.which, {dt / 2.0, 8.0});
    const double d = std::max({std::abs(coarse.P - fine.P), std::abs(coarse.F - fine.F),
                               std::abs(principal_phase(coarse.phase - fine.phase))});
    if (d > worst) {
      worst = d;
      at = to_string(c.which) + " T_f=" + num(c.T_f) + " kappa_l=" + num(c.kappa_l) + " g0=" + num(c.g0);
    }
  }
  return {identical && worst < kStepHalvingTolerance,
          std::string(identical ? "repeated CLI runs byte-identical" : "repeated CLI runs differ") +
              "; max metric change on halving dt " + num(worst) + " (" + at + ", tol " +
              num(kStepHalvingTolerance) + ")"};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Verdict()> fn;
  };
  const std::vector<Entry> entries{
      {1, "bare-cavity fidelity", criterion1},  {2, "phase claims", criterion2},
      {4, "adiabatic oracles", criterion4},     {5, "figure trends", criterion5},
      {6, "gate equivalence", criterion6},      {7, "two-sided mapping", criterion7},
      {8, "cluster recovery", criterion8},      {9, "growth law", criterion9},
      {10, "determinism", criterion10},         {3, "flux balance", criterion3},
  };
  std::vector<std::pair<int, std::string>> lines;
  bool all = true;
  try {
    const auto t0 = Clock::now();
    compute_fig2();
    compute_fig3();
    std::printf("figure grids computed in %.1f s\n", seconds_since(t0));
  } catch (const std::exception& e) {
    std::printf("FAIL figure grids: %s\n", e.what());
    return 1;
  }
  for (const auto& e : entries) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = e.fn();
    } catch (const std::exception& ex) {
      v = {false, std::string("exception: ") + ex.what()};
    }
    char head[128];
    std::snprintf(head, sizeof head, "%s criterion %2d (%s, %.2f s): ", v.pass ? "PASS" : "FAIL", e.id, e.name,
                  seconds_since(t0));
    lines.emplace_back(e.id, head + v.detail);
    all = all && v.pass;
  }
  std::sort(lines.begin(), lines.end());
  int passed = 0;
  for (const auto& [id, line] : lines) {
    std::printf("%s\n", line.c_str());
    if (line.rfind("PASS", 0) == 0) ++passed;
  }
  std::printf("%d/%zu criteria passed\n", passed, lines.size());
  return all ? 0 : 1;
}
