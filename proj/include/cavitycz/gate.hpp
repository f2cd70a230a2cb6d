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

/// Post-selected controlled-phase gate between two cavity-trapped atoms.
///
/// A single photon, prepared in |L>, passes a quarter-wave plate W, reflects
/// off cavity A, passes W, reflects off cavity B, passes W once more and has
/// its polarization measured. Only the R component meets an atom in |1>; all
/// other branches see an empty cavity. With ideal pulse-shape preservation
/// (F0 = F1 = 1) each reflection reduces to a complex branch amplitude:
/// amp0 = -sqrt(P0) for the empty cavity and amp1 = +sqrt(P1) for the coupled
/// one.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "cavitycz/errors.hpp"
#include "cavitycz/iosolver.hpp"
#include "cavitycz/parallel.hpp"
#include "cavitycz/physics.hpp"

namespace cavitycz {

/// Reflection amplitudes of the decoupled and coupled branches.
struct BranchReflectivities {
  double P0 = 1.0;  // empty-cavity success probability
  double r = 1.0;   // P1 / P0
  Complex amp0{-1.0, 0.0};
  Complex amp1{1.0, 0.0};

  double P1() const { return r * P0; }

  /// Canonical amplitudes: pi phase for the empty cavity, zero for the coupled.
  static BranchReflectivities make(double P0, double r) {
    if (!(P0 > 0.0 && P0 <= 1.0)) throw DomainError("P0 must lie in (0, 1]");
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("r must be non-negative");
    return {P0, r, Complex(-std::sqrt(P0), 0.0), Complex(std::sqrt(r * P0), 0.0)};
  }

  /// Arbitrary complex amplitudes, e.g. measured from a simulation.
  static BranchReflectivities from_amplitudes(Complex amp0, Complex amp1) {
    const double P0 = std::norm(amp0);
    if (!(P0 > 0.0)) throw DomainError("decoupled amplitude must be non-zero");
    return {P0, std::norm(amp1) / P0, amp0, amp1};
  }
};

/// Pure state of atoms A and B over |00>, |01>, |10>, |11> (A is the high bit).
struct TwoQubitState {
  std::array<Complex, 4> amp{};

  double norm() const {
    double s = 0.0;
    for (auto a : amp) s += std::norm(a);
    return std::sqrt(s);
  }

  TwoQubitState normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw DomainError("cannot normalize a zero two-qubit state");
    TwoQubitState out = *this;
    for (auto& a : out.amp) a /= n;
    return out;
  }

  Complex inner(const TwoQubitState& other) const {
    Complex s{};
    for (std::size_t i = 0; i < 4; ++i) s += std::conj(amp[i]) * other.amp[i];
    return s;
  }

  /// |<this|other>| for unit-norm states.
  double fidelity(const TwoQubitState& other) const { return std::abs(inner(other)); }

  /// Pauli X on atom B.
  TwoQubitState flip_b() const { return {{amp[1], amp[0], amp[3], amp[2]}}; }

  /// CZ |+>|+> = (|00> + |01> + |10> - |11>) / 2.
  static TwoQubitState ideal_cz() { return {{0.5, 0.5, 0.5, -0.5}}; }
};

using DensityMatrix4 = std::array<std::array<Complex, 4>, 4>;

struct GateOutcome {
  double P_L = 0.0;
  double P_R = 0.0;
  double P_total = 0.0;
  TwoQubitState psi_L;
  TwoQubitState psi_R_raw;  // before the X correction on atom B
  TwoQubitState psi_R;      // after the correction
  double F_L = 0.0;
  double F_R = 0.0;
  double F_avg = 0.0;  // (P_L F_L + P_R F_R) / (P_L + P_R)
};

namespace detail {

inline void finish_outcome(GateOutcome& g) {
  const auto ideal = TwoQubitState::ideal_cz();
  g.psi_R = g.psi_R_raw.flip_b();
  g.P_total = g.P_L + g.P_R;
  g.F_L = ideal.fidelity(g.psi_L);
  g.F_R = ideal.fidelity(g.psi_R);
  g.F_avg = g.P_total > 0.0 ? (g.P_L * g.F_L + g.P_R * g.F_R) / g.P_total : 0.0;
}

}  // namespace detail

/// Result of reflecting (|L> + |R>)/sqrt(2) off one cavity whose atom is in
/// (|0> + |1>)/sqrt(2). The state is over |0L>, |0R>, |1L>, |1R>.
struct SingleCavityResult {
  double P = 0.0;
  double F = 0.0;
  std::array<Complex, 4> state{};
};

/// P = P0 (3 + r) / 4, F = (3 + sqrt r) / (2 sqrt(3 + r)); the state is
/// (|0L> + |0R> + |1L> - sqrt(r) |1R>) / sqrt(3 + r) up to a global phase.
inline SingleCavityResult single_cavity_entangle(const BranchReflectivities& b) {
  if (!(b.P0 > 0.0 && b.P0 <= 1.0)) throw DomainError("P0 must lie in (0, 1]");
  if (!(b.r >= 0.0)) throw DomainError("r must be non-negative");
  const double root_r = std::sqrt(b.r);
  const double n = std::sqrt(3.0 + b.r);
  SingleCavityResult out;
  out.P = 0.25 * b.P0 * (3.0 + b.r);
  out.F = (3.0 + root_r) / (2.0 * n);
  out.state = {1.0 / n, 1.0 / n, 1.0 / n, -root_r / n};
  return out;
}

/// Closed-form two-cavity gate with canonical branch amplitudes.
inline GateOutcome two_cavity_gate(const BranchReflectivities& b) {
  if (!(b.P0 > 0.0 && b.P0 <= 1.0)) throw DomainError("P0 must lie in (0, 1]");
  if (!(b.r >= 0.0)) throw DomainError("r must be non-negative");
  const double r = b.r;
  const double s = std::sqrt(r);
  const double p0sq = b.P0 * b.P0;
  GateOutcome g;
  g.P_L = p0sq / 32.0 * (r * r + 2.0 * r + 4.0 * (r - 1.0) * s + 13.0);
  g.P_R = p0sq / 32.0 * (r + 3.0) * (r + 3.0);
  const double cL = b.P0 / std::sqrt(8.0 * g.P_L);
  const double cR = b.P0 / std::sqrt(8.0 * g.P_R);
  g.psi_L = {{cL, cL, cL, -cL * (r + 2.0 * s - 1.0) / 2.0}};
  g.psi_R_raw = {{cR, cR, -cR * s, cR * (r + 1.0) / 2.0}};
  detail::finish_outcome(g);
  return g;
}

/// Literal simulation of the wave-plate / cavity network on the 8-dimensional
/// space polarization (x) atom A (x) atom B, with arbitrary branch amplitudes.
inline GateOutcome circuit_oracle(Complex amp0, Complex amp1) {
  // index = pol * 4 + a * 2 + b, pol 0 = L, 1 = R
  using Vec = std::array<Complex, 8>;
  const double h = 1.0 / std::numbers::sqrt2;
  auto wave_plate = [h](const Vec& v) {
    Vec out{};
    for (int ab = 0; ab < 4; ++ab) {
      out[ab] = h * (v[ab] + v[4 + ab]);
      out[4 + ab] = h * (v[ab] - v[4 + ab]);
    }
    return out;
  };
  auto cavity = [&](const Vec& v, int which) {
    Vec out{};
    for (int i = 0; i < 8; ++i) {
      const int pol = i >> 2;
      const int atom = which == 0 ? (i >> 1) & 1 : i & 1;
      out[i] = v[i] * ((pol == 1 && atom == 1) ? amp1 : amp0);
    }
    return out;
  };
  Vec v{};
  for (int ab = 0; ab < 4; ++ab) v[ab] = 0.5;
  v = wave_plate(cavity(wave_plate(cavity(wave_plate(v), 0)), 1));

  GateOutcome g;
  TwoQubitState left{{v[0], v[1], v[2], v[3]}};
  TwoQubitState right{{v[4], v[5], v[6], v[7]}};
  g.P_L = left.norm() * left.norm();
  g.P_R = right.norm() * right.norm();
  g.psi_L = g.P_L > 0.0 ? left.normalized() : left;
  g.psi_R_raw = g.P_R > 0.0 ? right.normalized() : right;
  detail::finish_outcome(g);
  return g;
}

inline GateOutcome circuit_oracle(const BranchReflectivities& b) {
  return circuit_oracle(b.amp0, b.amp1);
}

/// One-sided equivalent of a symmetric two-sided cavity whose mirrors each
/// decay at kappa_c_prime: the mode (b1 + b2)/sqrt(2) selected by a 50:50
/// beam splitter sees a one-sided cavity with kappa_c = 2 kappa_c_prime.
inline CavityParams two_sided_effective_params(CavityParams base, double kappa_c_prime) {
  if (!(kappa_c_prime > 0.0) || !std::isfinite(kappa_c_prime)) {
    throw DomainError("per-mirror decay rate must be positive");
  }
  base.kappa_c = 2.0 * kappa_c_prime;
  return base;
}

/// Reflection of the beam-splitter mode off a two-sided cavity.
struct TwoSidedRecord {
  ReflectionRecord combined;  // the (b1 + b2)/sqrt(2) output
  double dark_port = 0.0;     // int |(o1 - o2)/sqrt(2)|^2 dt relative to the input
};

/// Direct two-port model: both mirrors (rate kappa_c_prime each) are driven
/// with half of the input split by a 50:50 beam splitter, and the two
/// reflected ports are recombined on the same splitter. `p.kappa_c` is
/// ignored; the other rates and the motion model are taken from `p`.
inline TwoSidedRecord reflect_two_sided(const CavityParams& p, double kappa_c_prime,
                                        const PulseEnvelope& f_in, ReflectionCase which) {
  p.validate();
  if (!(kappa_c_prime > 0.0)) throw DomainError("per-mirror decay rate must be positive");
  const double h = 1.0 / std::numbers::sqrt2;
  const double root_k = std::sqrt(kappa_c_prime);
  const std::size_t n = f_in.samples.size();
  std::vector<Complex> in1(n), in2(n), drive(n);
  for (std::size_t i = 0; i < n; ++i) {
    in1[i] = h * f_in.samples[i];
    in2[i] = h * f_in.samples[i];
    drive[i] = root_k * in1[i] + root_k * in2[i];
  }
  const auto traj = integrate_cavity(p, 2.0 * kappa_c_prime, f_in.grid, drive,
                                     which == ReflectionCase::kCoupled);
  std::vector<Complex> bright(n), dark(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex out1 = in1[i] + root_k * traj.cavity[i];
    const Complex out2 = in2[i] + root_k * traj.cavity[i];
    bright[i] = h * (out1 + out2);
    dark[i] = h * (out1 - out2);
  }
  TwoSidedRecord rec{detail::make_record(f_in, PulseEnvelope(f_in.grid, std::move(bright)), traj, p),
                     0.0};
  rec.dark_port = PulseEnvelope(f_in.grid, std::move(dark)).norm2() / f_in.norm2();
  return rec;
}

/// Gate run with full envelope propagation instead of the ideal amplitudes.
struct SimulatedGate {
  GateOutcome outcome;        // psi_* are the projections onto the input mode
  DensityMatrix4 rho_L{};     // post-selected atomic state, temporal mode traced out
  DensityMatrix4 rho_R{};     // after the X correction on atom B
  std::vector<PulseEnvelope> branches;  // final envelopes, index pol * 4 + a * 2 + b
};

namespace detail {

inline PulseEnvelope propagate_branch(const CavityParams& p, const PulseEnvelope& env,
                                      ReflectionCase which) {
  bool zero = true;
  for (auto z : env.samples) {
    if (z != Complex{}) {
      zero = false;
      break;
    }
  }
  if (zero) return env;
  return reflect(p, env, which).f_out;
}

inline double fidelity_with(const DensityMatrix4& rho, const TwoQubitState& psi) {
  Complex s{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) s += std::conj(psi.amp[i]) * rho[i][j] * psi.amp[j];
  }
  return std::sqrt(std::max(0.0, s.real()));
}

}  // namespace detail

/// Propagates the whole pulse through the network, one envelope per
/// (polarization, atom A, atom B) branch. Detection probabilities come from
/// branch norms; the atomic state conditioned on a detector click is the
/// density matrix obtained by tracing out the temporal mode, and fidelities
/// are sqrt(<ideal|rho|ideal>).
inline SimulatedGate gate_from_simulation(const CavityParams& pA, const CavityParams& pB,
                                          const PulseEnvelope& f_in) {
  pA.validate();
  pB.validate();
  const double in_norm2 = f_in.norm2();
  if (!(in_norm2 > 0.0)) throw DomainError("input envelope has zero norm");
  const double h = 1.0 / std::numbers::sqrt2;
  const std::size_t n = f_in.samples.size();

  std::vector<PulseEnvelope> v;
  v.reserve(8);
  for (int i = 0; i < 8; ++i) {
    std::vector<Complex> s(n);
    if (i < 4) {
      for (std::size_t k = 0; k < n; ++k) s[k] = 0.5 * f_in.samples[k];
    }
    v.emplace_back(f_in.grid, std::move(s));
  }
  auto wave_plate = [&](const std::vector<PulseEnvelope>& in) {
    std::vector<PulseEnvelope> out = in;
    for (int ab = 0; ab < 4; ++ab) {
      for (std::size_t k = 0; k < n; ++k) {
        const Complex l = in[ab].samples[k];
        const Complex r = in[4 + ab].samples[k];
        out[ab].samples[k] = h * (l + r);
        out[4 + ab].samples[k] = h * (l - r);
      }
    }
    return out;
  };
  auto cavity = [&](const std::vector<PulseEnvelope>& in, int which) {
    const CavityParams& p = which == 0 ? pA : pB;
    return parallel_map<PulseEnvelope>(8, [&](std::size_t i) {
      const int pol = static_cast<int>(i >> 2);
      const int atom = which == 0 ? static_cast<int>((i >> 1) & 1) : static_cast<int>(i & 1);
      const auto c = (pol == 1 && atom == 1) ? ReflectionCase::kCoupled : ReflectionCase::kBare;
      return detail::propagate_branch(p, in[i], c);
    });
  };
  v = wave_plate(cavity(wave_plate(cavity(wave_plate(v), 0)), 1));

  SimulatedGate sim{{}, {}, {}, v};
  auto reduce = [&](int pol, double& prob, DensityMatrix4& rho, TwoQubitState& psi) {
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& fi = v[static_cast<std::size_t>(pol) * 4 + i];
      psi.amp[i] = f_in.overlap(fi) / std::sqrt(in_norm2);
      for (std::size_t j = 0; j < 4; ++j) {
        rho[i][j] = v[static_cast<std::size_t>(pol) * 4 + j].overlap(fi) / in_norm2;
      }
    }
    prob = 0.0;
    for (std::size_t i = 0; i < 4; ++i) prob += rho[i][i].real();
    if (prob > 0.0) {
      for (auto& row : rho) {
        for (auto& x : row) x /= prob;
      }
    }
    if (psi.norm() > 0.0) psi = psi.normalized();
  };
  GateOutcome& g = sim.outcome;
  DensityMatrix4 rho_R_raw{};
  reduce(0, g.P_L, sim.rho_L, g.psi_L);
  reduce(1, g.P_R, rho_R_raw, g.psi_R_raw);
  detail::finish_outcome(g);
  // X on atom B permutes basis index b <-> 1 - b.
  auto flip = [](std::size_t i) { return i ^ 1u; };
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) sim.rho_R[i][j] = rho_R_raw[flip(i)][flip(j)];
  }
  const auto ideal = TwoQubitState::ideal_cz();
  g.F_L = detail::fidelity_with(sim.rho_L, ideal);
  g.F_R = detail::fidelity_with(sim.rho_R, ideal);
  g.F_avg = g.P_total > 0.0 ? (g.P_L * g.F_L + g.P_R * g.F_R) / g.P_total : 0.0;
  return sim;
}

}  // namespace cavitycz
