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

/// Cartesian parameter sweeps over reflection runs, and the r-sweep of the
/// idealized gate.
#pragma once

#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "cavitycz/csv.hpp"
#include "cavitycz/gate.hpp"
#include "cavitycz/iosolver.hpp"
#include "cavitycz/parallel.hpp"
#include "cavitycz/physics.hpp"

namespace cavitycz {

struct SweepSpec {
  ReflectionCase which = ReflectionCase::kBare;
  std::vector<double> g0{0.0};
  std::vector<double> kappa_l{0.0};
  std::vector<double> gamma{1.0};
  std::vector<double> T_f{50.0};
  std::vector<double> T_g{50.0};
  std::vector<int> n_phi{16};
  double phi = 0.0;
  GridSettings grid;
};

struct SweepRow {
  double g0 = 0.0;
  double kappa_l = 0.0;
  double gamma = 0.0;
  double T_f = 0.0;
  double T_g = 0.0;
  int n_phi = 1;
  ReflectionCase which = ReflectionCase::kBare;
  double P = std::numeric_limits<double>::quiet_NaN();
  double F = std::numeric_limits<double>::quiet_NaN();
  double phase = std::numeric_limits<double>::quiet_NaN();
  double loss_atom = std::numeric_limits<double>::quiet_NaN();
  double loss_cavity = std::numeric_limits<double>::quiet_NaN();
  std::string error;
};

/// Evaluates one grid point. The coupled case is motion-averaged over n_phi
/// phases; the bare case ignores g0, T_g and n_phi.
inline SweepRow evaluate_point(SweepRow row, double phi, const GridSettings& grid) {
  try {
    CavityParams p;
    p.g0 = row.g0;
    p.kappa_l = row.kappa_l;
    p.gamma = row.gamma;
    p.T_g = row.T_g;
    p.phi = phi;
    const auto pulse = make_sech_pulse(row.T_f, make_grid(p, row.T_f, grid));
    if (row.which == ReflectionCase::kBare) {
      const auto r = reflect_bare(p, pulse);
      row.P = r.P;
      row.F = r.F;
      row.phase = r.phase;
      row.loss_atom = r.loss_atom;
      row.loss_cavity = r.loss_cavity;
    } else {
      const auto r = reflect_coupled_motion_averaged(p, pulse, row.n_phi);
      row.P = r.P;
      row.F = r.F;
      row.phase = r.phase;
      row.loss_atom = r.loss_atom;
      row.loss_cavity = r.loss_cavity;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

/// Rows in lexicographic order of (g0, kappa_l, gamma, T_f, T_g, n_phi).
inline std::vector<SweepRow> sweep(const SweepSpec& spec) {
  std::vector<SweepRow> points;
  for (double g0 : spec.g0)
    for (double kl : spec.kappa_l)
      for (double ga : spec.gamma)
        for (double tf : spec.T_f)
          for (double tg : spec.T_g)
            for (int nphi : spec.n_phi) {
              SweepRow r;
              r.g0 = g0;
              r.kappa_l = kl;
              r.gamma = ga;
              r.T_f = tf;
              r.T_g = tg;
              r.n_phi = nphi;
              r.which = spec.which;
              points.push_back(r);
            }
  return parallel_map<SweepRow>(points.size(), [&](std::size_t i) {
    return evaluate_point(points[i], spec.phi, spec.grid);
  });
}

inline constexpr std::string_view kSweepHeader =
    "g0,kappa_l,gamma,T_f,T_g,n_phi,case,P,F,phase,loss_atom,loss_cavity,error";

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.g0) << ',' << format_number(r.kappa_l) << ',' << format_number(r.gamma) << ','
        << format_number(r.T_f) << ',' << format_number(r.T_g) << ',' << r.n_phi << ',' << to_string(r.which)
        << ',' << format_number(r.P) << ',' << format_number(r.F) << ',' << format_number(r.phase) << ','
        << format_number(r.loss_atom) << ',' << format_number(r.loss_cavity) << ',' << csv_field(r.error)
        << '\n';
  }
}

struct GateSweepRow {
  double P0 = 0.0;
  double r = 0.0;
  GateOutcome outcome;
};

inline std::vector<GateSweepRow> gate_sweep(double P0, const std::vector<double>& r_values) {
  std::vector<GateSweepRow> rows;
  rows.reserve(r_values.size());
  for (double r : r_values) rows.push_back({P0, r, two_cavity_gate(BranchReflectivities::make(P0, r))});
  return rows;
}

inline constexpr std::string_view kGateHeader = "P0,r,P_L,P_R,P_total,F_L,F_R,F_avg";

inline void write_gate_csv(std::ostream& out, const std::vector<GateSweepRow>& rows) {
  out << kGateHeader << '\n';
  for (const auto& row : rows) {
    const auto& g = row.outcome;
    out << format_number(row.P0) << ',' << format_number(row.r) << ',' << format_number(g.P_L) << ','
        << format_number(g.P_R) << ',' << format_number(g.P_total) << ',' << format_number(g.F_L) << ','
        << format_number(g.F_R) << ',' << format_number(g.F_avg) << '\n';
  }
}

// Figure grids.

inline SweepSpec fig2_spec() {
  SweepSpec s;
  s.which = ReflectionCase::kBare;
  s.kappa_l.clear();
  for (int k = 0; k <= 12; ++k) s.kappa_l.push_back(0.025 * k);
  s.T_f = {10.0, 20.0, 30.0, 50.0, 70.0};
  s.n_phi = {1};
  return s;
}

/// Period-averaged couplings on the fig3 axis.
inline std::vector<double> fig3_mean_couplings() {
  return {1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0};
}

inline SweepSpec fig3_spec(int n_phi = 16) {
  SweepSpec s;
  s.which = ReflectionCase::kCoupled;
  s.g0.clear();
  for (double mg : fig3_mean_couplings()) s.g0.push_back(peak_for_mean_coupling(mg));
  s.kappa_l = {0.0, 0.2};
  s.gamma = {1.0};
  s.T_f = {10.0, 50.0};
  s.T_g = {50.0, 125.0};
  s.n_phi = {n_phi};
  return s;
}

inline std::vector<double> fig5_r_values() {
  std::vector<double> r;
  for (int k = 0; k <= 40; ++k) r.push_back(0.05 * k);
  return r;
}

}  // namespace cavitycz
