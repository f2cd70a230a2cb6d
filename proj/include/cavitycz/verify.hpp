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

/// Self-verification suites shared by the CLI `verify` command and the tests.
/// Each check carries the measured residual and the tolerance it must beat.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cavitycz/cluster.hpp"
#include "cavitycz/csv.hpp"
#include "cavitycz/gate.hpp"
#include "cavitycz/iosolver.hpp"
#include "cavitycz/physics.hpp"

namespace cavitycz {

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

inline Check make_check(std::string name, double residual, double tolerance) {
  return {std::move(name), residual, tolerance, std::isfinite(residual) && residual < tolerance};
}

inline bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

inline void write_report(std::ostream& out, const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " residual=" << format_number(c.residual)
        << " tol=" << format_number(c.tolerance) << '\n';
  }
}

/// Largest |a_i - e^{i theta} b_i| after aligning the global phase of b to a.
inline double state_distance(const TwoQubitState& a, const TwoQubitState& b) {
  const Complex ov = b.inner(a);
  const Complex phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : Complex(1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a.amp[i] - phase * b.amp[i]));
  return worst;
}

/// Largest field-wise discrepancy between two gate outcomes.
inline double outcome_distance(const GateOutcome& a, const GateOutcome& b) {
  double d = 0.0;
  for (double x : {a.P_L - b.P_L, a.P_R - b.P_R, a.P_total - b.P_total, a.F_L - b.F_L, a.F_R - b.F_R,
                   a.F_avg - b.F_avg}) {
    d = std::max(d, std::abs(x));
  }
  d = std::max(d, state_distance(a.psi_L, b.psi_L));
  d = std::max(d, state_distance(a.psi_R_raw, b.psi_R_raw));
  d = std::max(d, state_distance(a.psi_R, b.psi_R));
  return d;
}

inline constexpr double kFluxTolerance = 1e-6;
inline constexpr double kOracleTolerance = 1e-10;
inline constexpr double kRecoveryTolerance = 1e-10;
inline constexpr double kTwoSidedTolerance = 1e-8;

/// |int|f_in|^2 - int|f_out|^2 - gamma int|e|^2 - kappa_l int|c|^2| on a
/// fixed battery of bare and coupled runs.
inline std::vector<Check> verify_flux() {
  std::vector<Check> out;
  for (double tf : {10.0, 50.0}) {
    for (double kl : {0.0, 0.3}) {
      CavityParams p;
      p.kappa_l = kl;
      const auto bare = reflect_bare(p, make_sech_pulse(tf, make_grid(p, tf)));
      out.push_back(make_check("flux bare T_f=" + format_number(tf) + " kappa_l=" + format_number(kl),
                               std::abs(bare.flux_residual()), kFluxTolerance));
      for (double g0 : {1.0, 5.0}) {
        p.g0 = g0;
        p.phi = 0.3;
        const auto cpl = reflect_coupled(p, make_sech_pulse(tf, make_grid(p, tf)));
        out.push_back(make_check("flux coupled T_f=" + format_number(tf) + " kappa_l=" + format_number(kl) +
                                     " g0=" + format_number(g0),
                                 std::abs(cpl.flux_residual()), kFluxTolerance));
      }
    }
  }
  return out;
}

/// Closed-form gate against the literal network simulation on seeded random
/// (P0, r) draws, plus the r = 1 identities.
inline std::vector<Check> verify_oracle(std::uint64_t seed = 2024, int draws = 100) {
  std::vector<Check> out;
  Rng rng = derived_rng(seed, 0);
  double worst = 0.0;
  for (int k = 0; k < draws; ++k) {
    const double P0 = 1.0 - uniform01(rng);  // (0, 1]
    const double r = 3.0 * uniform01(rng);
    const auto b = BranchReflectivities::make(P0, r);
    const double d = outcome_distance(two_cavity_gate(b), circuit_oracle(b));
    worst = std::max(worst, d);
    out.push_back(make_check("oracle draw " + std::to_string(k) + " P0=" + format_number(P0) +
                                 " r=" + format_number(r),
                             d, kOracleTolerance));
  }
  for (double P0 : {0.3, 0.7, 1.0}) {
    const auto g = two_cavity_gate(BranchReflectivities::make(P0, 1.0));
    out.push_back(make_check("r=1 P_total=P0^2 P0=" + format_number(P0), std::abs(g.P_total - P0 * P0), 1e-12));
    out.push_back(make_check("r=1 F_avg=1 P0=" + format_number(P0), std::abs(g.F_avg - 1.0), 1e-12));
  }
  return out;
}

/// Failed attachment followed by recovery, for every chain length 4..10,
/// `bases` random failure bases and both outcomes of every measurement;
/// then splitting at every interior qubit of chains up to 10 qubits.
inline std::vector<Check> verify_recovery(std::uint64_t seed = 7, int bases = 20) {
  std::vector<Check> out;
  Rng rng = derived_rng(seed, 1);
  for (int n = 4; n <= 10; ++n) {
    const SmallState chain = make_linear_cluster(n);
    const SmallState target = make_linear_cluster(n - 2);
    for (int draw = 0; draw < bases; ++draw) {
      const QubitBasis basis = random_basis(rng);
      double p_outcome0 = 0.0;
      for (int m = 0; m < 2; ++m) {
        const auto failed = fail_attach(chain, basis, m);
        for (int s = 0; s < 2; ++s) {
          const auto rec = recover_failure(failed.state, s);
          if (s == 0) p_outcome0 += failed.probability * rec.probability;
          out.push_back(make_check("recover n=" + std::to_string(n) + " draw=" + std::to_string(draw) +
                                       " basis_outcome=" + std::to_string(m) + " outcome=" + std::to_string(s),
                                   std::abs(1.0 - rec.state.fidelity(target)), kRecoveryTolerance));
        }
      }
      out.push_back(make_check("recover n=" + std::to_string(n) + " draw=" + std::to_string(draw) +
                                   " P(outcome 0)=1/2",
                               std::abs(p_outcome0 - 0.5), kRecoveryTolerance));
    }
  }
  for (int n = 5; n <= 10; ++n) {
    const SmallState chain = make_linear_cluster(n);
    for (int i = 2; i <= n - 3; ++i) {
      const SmallState left = make_linear_cluster(i - 1);
      const SmallState right = make_linear_cluster(n - i - 2);
      const QubitBasis basis = random_basis(rng);
      double worst = 0.0;
      for (int m = 0; m < 8; ++m) {
        const auto sp = split_measure(chain, i, BreakOutcomes{basis, m & 1, (m >> 1) & 1, (m >> 2) & 1});
        worst = std::max({worst, std::abs(1.0 - sp.left.fidelity(left)), std::abs(1.0 - sp.right.fidelity(right))});
      }
      out.push_back(make_check("split n=" + std::to_string(n) + " i=" + std::to_string(i), worst,
                               kRecoveryTolerance));
    }
  }
  return out;
}

/// Growth law (3P - 2) m within three standard errors.
inline std::vector<Check> verify_growth(std::uint64_t seed = 11, std::int64_t m = 10000,
                                       std::int64_t trials = 200) {
  std::vector<Check> out;
  for (double P : {0.5, 0.7, 0.75, 0.9}) {
    const auto g = monte_carlo_growth(P, m, trials, seed);
    // residual in units of standard errors; must stay below 3
    const double z = std::abs(g.mean_delta - g.expected()) / g.std_err;
    out.push_back(make_check("growth P=" + format_number(P) + " mean=" + format_number(g.mean_delta) +
                                 " expected=" + format_number(g.expected()),
                             z, 3.0));
  }
  return out;
}

/// One-sided run at kappa_c = 2 kappa_c' against the direct two-port model.
inline std::vector<Check> verify_two_sided() {
  std::vector<Check> out;
  for (double kp : {0.5, 1.0, 2.0}) {
    for (auto which : {ReflectionCase::kBare, ReflectionCase::kCoupled}) {
      CavityParams base;
      base.kappa_l = 0.1;
      base.g0 = 3.0;
      base.phi = 1.0;
      const CavityParams eff = two_sided_effective_params(base, kp);
      const double tf = 50.0;
      const auto pulse = make_sech_pulse(tf, make_grid(eff, tf));
      const auto one = reflect(eff, pulse, which);
      const auto two = reflect_two_sided(base, kp, pulse, which);
      const double d = std::max({std::abs(one.P - two.combined.P), std::abs(one.F - two.combined.F),
                                 std::abs(one.phase - two.combined.phase), two.dark_port});
      out.push_back(make_check("two-sided kappa_c'=" + format_number(kp) + " " + to_string(which), d,
                               kTwoSidedTolerance));
    }
  }
  return out;
}

}  // namespace cavitycz
