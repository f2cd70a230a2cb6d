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

/// Physical parameters of one atom-cavity node, the uniform time grid, the
/// input photon envelope and the motion-modulated coupling g(t).
///
/// Units: every rate is measured in units of the mirror decay rate kappa_c of
/// the reference cavity and every time in units of 1/kappa_c.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cavitycz/errors.hpp"

namespace cavitycz {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Rates and motion parameters of a single trapped-atom cavity.
struct CavityParams {
  double g0 = 0.0;       // peak atom-cavity coupling
  double kappa_c = 1.0;  // mirror (coherent) decay rate
  double kappa_l = 0.0;  // unwanted intracavity loss
  double gamma = 1.0;    // atomic spontaneous emission
  double T_g = 50.0;     // period of the atomic motion
  double phi = 0.0;      // motion phase in [0, 2pi)

  /// Total cavity field decay rate.
  double kappa_total() const { return kappa_c + kappa_l; }

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(g0) || !finite(kappa_c) || !finite(kappa_l) || !finite(gamma) ||
        !finite(T_g) || !finite(phi)) {
      throw DomainError("cavity parameters must be finite");
    }
    if (g0 < 0.0 || kappa_l < 0.0 || gamma < 0.0) {
      throw DomainError("rates g0, kappa_l, gamma must be non-negative");
    }
    if (kappa_c <= 0.0) throw DomainError("kappa_c must be positive");
    if (T_g <= 0.0) throw DomainError("T_g must be positive");
    if (phi < 0.0 || phi >= kTwoPi) throw DomainError("phi must lie in [0, 2pi)");
  }
};

/// Wraps an angle into [0, 2pi).
inline double wrap_phase(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

/// Uniform sampling grid. Sample times are placed symmetrically about the
/// window centre so that mirrored samples of a symmetric window are exact
/// negatives of each other.
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, double dt_request) {
    if (!(t_end > t_start) || !(dt_request > 0.0) || !std::isfinite(t_end - t_start)) {
      throw DomainError("time grid needs t_end > t_start and dt > 0");
    }
    const double span = t_end - t_start;
    intervals_ = static_cast<std::size_t>(std::llround(span / dt_request));
    if (intervals_ < 2) intervals_ = 2;
    t_start_ = t_start;
    t_end_ = t_end;
    dt_ = span / static_cast<double>(intervals_);
  }

  /// Symmetric window [-half_width, half_width].
  static TimeGrid symmetric(double half_width, double dt_request) {
    return TimeGrid(-half_width, half_width, dt_request);
  }

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  double dt() const { return dt_; }
  std::size_t size() const { return intervals_ + 1; }

  double at(std::size_t i) const {
    const double centre = 0.5 * (t_start_ + t_end_);
    const double k = static_cast<double>(i) - 0.5 * static_cast<double>(intervals_);
    return centre + k * dt_;
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t_start_ = 0.0;
  double t_end_ = 0.0;
  double dt_ = 0.0;
  std::size_t intervals_ = 0;
};

/// Trapezoidal integral of uniformly spaced samples.
inline double trapezoid(std::span<const double> y, double dt) {
  if (y.size() < 2) return 0.0;
  double sum = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) sum += y[i];
  return sum * dt;
}

inline Complex trapezoid(std::span<const Complex> y, double dt) {
  if (y.size() < 2) return {};
  Complex sum = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) sum += y[i];
  return sum * dt;
}

/// Complex photon envelope sampled on a TimeGrid.
struct PulseEnvelope {
  TimeGrid grid;
  std::vector<Complex> samples;

  PulseEnvelope(TimeGrid g, std::vector<Complex> s) : grid(g), samples(std::move(s)) {
    if (samples.size() != grid.size()) {
      throw DomainError("envelope sample count does not match its grid");
    }
  }

  /// Trapezoidal integral of |f|^2.
  double norm2() const {
    std::vector<double> mag(samples.size());
    std::transform(samples.begin(), samples.end(), mag.begin(),
                   [](Complex z) { return std::norm(z); });
    return trapezoid(mag, grid.dt());
  }

  /// Trapezoidal integral of conj(this) * other.
  Complex overlap(const PulseEnvelope& other) const {
    if (!(other.grid == grid)) throw DomainError("overlap of envelopes on different grids");
    std::vector<Complex> prod(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      prod[i] = std::conj(samples[i]) * other.samples[i];
    }
    return trapezoid(prod, grid.dt());
  }

  PulseEnvelope normalized() const {
    const double n2 = norm2();
    if (!(n2 > 0.0)) throw DomainError("cannot normalize a zero envelope");
    const double s = 1.0 / std::sqrt(n2);
    PulseEnvelope out = *this;
    for (auto& z : out.samples) z *= s;
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (auto z : samples) m = std::max(m, std::abs(z));
    return m;
  }
};

/// Run-level grid controls. A dt of zero selects the automatic step rule.
struct GridSettings {
  double dt = 0.0;
  double window = 8.0;  // half-width of the time window in units of T_f
};

/// Automatic step: resolves the pulse width and the fastest internal rate.
inline double default_dt(const CavityParams& p, double T_f) {
  const double fastest = std::max({p.g0, p.kappa_total(), p.gamma});
  return std::min(T_f / 2000.0, 1.0 / (20.0 * fastest));
}

inline TimeGrid make_grid(const CavityParams& p, double T_f, const GridSettings& s = {}) {
  if (!(T_f > 0.0) || !std::isfinite(T_f)) throw DomainError("pulse width T_f must be positive");
  if (!(s.window > 0.0) || !std::isfinite(s.window)) throw DomainError("window must be positive");
  if (s.dt < 0.0 || !std::isfinite(s.dt)) throw DomainError("dt must be non-negative");
  const double dt = s.dt > 0.0 ? s.dt : default_dt(p, T_f);
  return TimeGrid::symmetric(s.window * T_f, dt);
}

/// Relative edge amplitude above which a pulse counts as truncated.
inline constexpr double kEdgeTolerance = 1e-6;

/// Hyperbolic-secant photon, f(t) proportional to 1/(T_f cosh(2t/T_f)),
/// renormalized on the grid to unit trapezoidal norm.
inline PulseEnvelope make_sech_pulse(double T_f, const TimeGrid& grid) {
  if (!(T_f > 0.0) || !std::isfinite(T_f)) throw DomainError("pulse width T_f must be positive");
  std::vector<Complex> s(grid.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = 1.0 / (T_f * std::cosh(2.0 * std::abs(grid.at(i)) / T_f));
  }
  PulseEnvelope pulse(grid, std::move(s));
  const double peak = pulse.max_abs();
  const double edge = std::max(std::abs(pulse.samples.front()), std::abs(pulse.samples.back()));
  if (!(edge < kEdgeTolerance * peak)) {
    throw WindowTooSmall("time window too small for pulse width T_f=" + std::to_string(T_f));
  }
  return pulse.normalized();
}

/// g(t) = g0 cos((pi/3) sin(2 pi t / T_g + phi)).
inline double coupling_at(const CavityParams& p, double t) {
  return p.g0 * std::cos(std::numbers::pi / 3.0 * std::sin(kTwoPi * t / p.T_g + p.phi));
}

/// Period average of cos((pi/3) sin(theta)), which is J0(pi/3).
inline double mean_coupling_factor() {
  static const double factor = std::cyl_bessel_j(0.0, std::numbers::pi / 3.0);
  return factor;
}

/// Time average of g(t) over one motion period. Independent of phi.
inline double mean_coupling(const CavityParams& p) { return p.g0 * mean_coupling_factor(); }

/// Peak coupling g0 that yields the requested period-averaged coupling.
inline double peak_for_mean_coupling(double mean_g) { return mean_g / mean_coupling_factor(); }

}  // namespace cavitycz
