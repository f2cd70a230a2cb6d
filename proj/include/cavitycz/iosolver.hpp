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

/// Single-photon reflection off a one-sided cavity, optionally containing a
/// resonantly coupled three-level atom prepared in the coupled ground state.
///
/// In the one-excitation sector the input-output relations reduce to linear
/// equations for the cavity amplitude c(t) and the excited-state amplitude
/// e(t), driven by the incoming envelope f_in(t):
///
///   dc/dt = -(kappa_c + kappa_l)/2 c - i g(t) e - sqrt(kappa_c) f_in(t)
///   de/dt = -gamma/2 e - i g(t) c
///   f_out(t) = f_in(t) + sqrt(kappa_c) c(t)
///
/// The reflected photon is detected with probability P = int |f_out|^2 dt
/// (for a unit-norm input); the rest leaves through gamma or kappa_l.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cavitycz/errors.hpp"
#include "cavitycz/parallel.hpp"
#include "cavitycz/physics.hpp"

namespace cavitycz {

enum class ReflectionCase { kBare, kCoupled };

inline std::string to_string(ReflectionCase c) {
  return c == ReflectionCase::kBare ? "bare" : "coupled";
}

/// Sampled cavity and atomic amplitudes along the grid.
struct CavityTrajectory {
  std::vector<Complex> cavity;
  std::vector<Complex> atom;
};

namespace detail {

struct Amplitudes {
  Complex c;
  Complex e;
};

inline Amplitudes axpy(const Amplitudes& y, double h, const Amplitudes& k) {
  return {y.c + h * k.c, y.e + h * k.e};
}

}  // namespace detail

/// Classical fixed-step RK4 for the driven cavity-atom equations.
///
/// `drive` holds the total coherent drive D(t) entering dc/dt as -D(t); it is
/// interpolated linearly at half steps. `mirror_rate` is the summed decay rate
/// of all transmissive mirrors. When `with_atom` is false g(t) is identically
/// zero, so the atom amplitude stays exactly zero.
inline CavityTrajectory integrate_cavity(const CavityParams& p, double mirror_rate,
                                         const TimeGrid& grid, std::span<const Complex> drive,
                                         bool with_atom) {
  const std::size_t n = grid.size();
  if (drive.size() != n) throw DomainError("drive length does not match grid");
  const double half_kappa = 0.5 * (mirror_rate + p.kappa_l);
  const double half_gamma = 0.5 * p.gamma;
  const double h = grid.dt();
  const Complex minus_i(0.0, -1.0);

  auto rhs = [&](double t, const detail::Amplitudes& y, Complex d) {
    const double g = with_atom ? coupling_at(p, t) : 0.0;
    return detail::Amplitudes{-half_kappa * y.c + minus_i * g * y.e - d,
                              -half_gamma * y.e + minus_i * g * y.c};
  };

  CavityTrajectory traj;
  traj.cavity.resize(n);
  traj.atom.resize(n);
  detail::Amplitudes y{};
  traj.cavity[0] = y.c;
  traj.atom[0] = y.e;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double t = grid.at(i);
    const Complex d0 = drive[i];
    const Complex d1 = drive[i + 1];
    const Complex dm = 0.5 * (d0 + d1);
    const auto k1 = rhs(t, y, d0);
    const auto k2 = rhs(t + 0.5 * h, detail::axpy(y, 0.5 * h, k1), dm);
    const auto k3 = rhs(t + 0.5 * h, detail::axpy(y, 0.5 * h, k2), dm);
    const auto k4 = rhs(t + h, detail::axpy(y, h, k3), d1);
    y.c += (h / 6.0) * (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c);
    y.e += (h / 6.0) * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e);
    if (!std::isfinite(y.c.real()) || !std::isfinite(y.c.imag()) ||
        !std::isfinite(y.e.real()) || !std::isfinite(y.e.imag())) {
      std::ostringstream msg;
      msg << "non-finite cavity state at t=" << grid.at(i + 1) << " (dt=" << h
          << " too large for the system rates)";
      throw NumericalError(msg.str());
    }
    traj.cavity[i + 1] = y.c;
    traj.atom[i + 1] = y.e;
  }
  return traj;
}

/// Output envelope and derived metrics of one reflection.
struct ReflectionRecord {
  PulseEnvelope f_out;             // as computed
  PulseEnvelope f_out_normalized;  // post-selected, unit norm (equals f_out when P == 0)
  double P = 0.0;                  // success probability
  double F = 0.0;                  // |<f_in|f_out_normalized>|
  double phase = 0.0;              // arg <f_in|f_out>, in (-pi, pi]
  double loss_atom = 0.0;          // gamma int |e|^2 dt
  double loss_cavity = 0.0;        // kappa_l int |c|^2 dt
  double cavity_occupation = 0.0;  // int |c|^2 dt
  Complex amplitude;               // <f_in|f_out> for unit-norm f_in

  /// 1 - P - loss_atom - loss_cavity.
  double flux_residual() const { return 1.0 - P - loss_atom - loss_cavity; }
};

/// Maps an angle to (-pi, pi].
inline double principal_phase(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::remainder(a, 2.0 * pi);
  if (a <= -pi) a += 2.0 * pi;
  return a;
}

namespace detail {

inline double integrate_norm(std::span<const Complex> v, double dt) {
  std::vector<double> mag(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mag[i] = std::norm(v[i]);
  return trapezoid(mag, dt);
}

/// Builds a record from an input, its output field, and the internal
/// trajectory. Probabilities are relative to the input norm.
inline ReflectionRecord make_record(const PulseEnvelope& f_in, PulseEnvelope f_out,
                                    const CavityTrajectory& traj, const CavityParams& p) {
  const double dt = f_in.grid.dt();
  const double in_norm2 = f_in.norm2();
  if (!(in_norm2 > 0.0)) throw DomainError("input envelope has zero norm");
  const double out_norm2 = f_out.norm2();
  ReflectionRecord rec{f_out, f_out, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, {}};
  rec.P = out_norm2 / in_norm2;
  rec.cavity_occupation = integrate_norm(traj.cavity, dt) / in_norm2;
  rec.loss_cavity = p.kappa_l * rec.cavity_occupation;
  rec.loss_atom = p.gamma * integrate_norm(traj.atom, dt) / in_norm2;
  rec.amplitude = f_in.overlap(f_out) / in_norm2;
  if (out_norm2 > 0.0) {
    rec.f_out_normalized = f_out.normalized();
    rec.F = std::abs(f_in.overlap(rec.f_out_normalized)) / std::sqrt(in_norm2);
    rec.phase = principal_phase(std::arg(rec.amplitude));
  }
  return rec;
}

}  // namespace detail

/// Reflection through a one-sided cavity; `with_atom` selects the coupled
/// case. Accepts arbitrary (not necessarily normalized) envelopes.
inline ReflectionRecord reflect(const CavityParams& p, const PulseEnvelope& f_in,
                                ReflectionCase which) {
  p.validate();
  const double root_kappa = std::sqrt(p.kappa_c);
  std::vector<Complex> drive(f_in.samples.size());
  for (std::size_t i = 0; i < drive.size(); ++i) drive[i] = root_kappa * f_in.samples[i];
  const auto traj =
      integrate_cavity(p, p.kappa_c, f_in.grid, drive, which == ReflectionCase::kCoupled);
  std::vector<Complex> out(f_in.samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f_in.samples[i] + root_kappa * traj.cavity[i];
  return detail::make_record(f_in, PulseEnvelope(f_in.grid, std::move(out)), traj, p);
}

/// Photon meets an empty (or decoupled) cavity: the P0/F0 case.
inline ReflectionRecord reflect_bare(const CavityParams& p, const PulseEnvelope& f_in) {
  return reflect(p, f_in, ReflectionCase::kBare);
}

/// Photon meets the cavity with the atom in the coupled state: the P1/F1 case
/// at the fixed motion phase p.phi.
inline ReflectionRecord reflect_coupled(const CavityParams& p, const PulseEnvelope& f_in) {
  return reflect(p, f_in, ReflectionCase::kCoupled);
}

/// Coupled reflection averaged over equally spaced motion phases.
struct AveragedReflection {
  double P = 0.0;
  double F = 0.0;
  double phase = 0.0;
  double loss_atom = 0.0;
  double loss_cavity = 0.0;
  double cavity_occupation = 0.0;
  std::vector<double> phis;
  std::vector<ReflectionRecord> per_phi;

  double flux_residual() const { return 1.0 - P - loss_atom - loss_cavity; }
};

/// Runs reflect_coupled at phi_k = p.phi + 2 pi k / n_phi (wrapped into
/// [0, 2 pi)) and returns arithmetic means. With n_phi = 1 and p.phi = 0 this
/// is the single run at phi = 0.
inline AveragedReflection reflect_coupled_motion_averaged(const CavityParams& p,
                                                          const PulseEnvelope& f_in,
                                                          int n_phi = 16) {
  if (n_phi < 1) throw DomainError("n_phi must be at least 1");
  p.validate();
  AveragedReflection avg;
  avg.phis.resize(static_cast<std::size_t>(n_phi));
  for (int k = 0; k < n_phi; ++k) {
    avg.phis[static_cast<std::size_t>(k)] = wrap_phase(p.phi + kTwoPi * k / n_phi);
  }
  avg.per_phi = parallel_map<ReflectionRecord>(avg.phis.size(), [&](std::size_t k) {
    CavityParams q = p;
    q.phi = avg.phis[k];
    try {
      return reflect_coupled(q, f_in);
    } catch (const NumericalError& err) {
      std::ostringstream msg;
      msg << err.what() << " [phi=" << q.phi << "]";
      throw NumericalError(msg.str());
    }
  });
  for (const auto& r : avg.per_phi) {
    avg.P += r.P;
    avg.F += r.F;
    avg.phase += r.phase;
    avg.loss_atom += r.loss_atom;
    avg.loss_cavity += r.loss_cavity;
    avg.cavity_occupation += r.cavity_occupation;
  }
  const double inv = 1.0 / n_phi;
  avg.P *= inv;
  avg.F *= inv;
  avg.phase *= inv;
  avg.loss_atom *= inv;
  avg.loss_cavity *= inv;
  avg.cavity_occupation *= inv;
  return avg;
}

}  // namespace cavitycz
