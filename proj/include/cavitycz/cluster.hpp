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

/// Cluster-state assembly with a probabilistic controlled-phase gate.
///
/// Two representations are used. Small chains (up to kMaxQubits) are exact
/// state vectors and certify the recovery rules: a failed attachment measures
/// the chain end in an unknown basis, after which measuring its neighbour in
/// the computational basis and a conditional Z restores the chain minus two
/// qubits. Large-scale growth statistics only need the length bookkeeping
/// (+1 per success, -2 per failure).
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cavitycz/errors.hpp"
#include "cavitycz/parallel.hpp"

namespace cavitycz {

using Rng = std::mt19937_64;
using Amplitude = std::complex<double>;

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Per-trial generator derived from (seed, index), so a trial's stream does
/// not depend on how trials are scheduled.
inline Rng derived_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline constexpr int kMaxQubits = 14;

/// State vector of n qubits; qubit k is bit k of the basis index.
class SmallState {
 public:
  SmallState() = default;

  SmallState(int n, std::vector<Amplitude> amplitudes) : n_(n), amp_(std::move(amplitudes)) {
    if (n < 0 || n > kMaxQubits) throw SizeError("qubit count out of range: " + std::to_string(n));
    if (amp_.size() != (std::size_t{1} << n)) throw SizeError("amplitude count must be 2^n");
  }

  /// |+>^n.
  static SmallState plus(int n) {
    if (n < 0 || n > kMaxQubits) throw SizeError("qubit count out of range: " + std::to_string(n));
    const std::size_t dim = std::size_t{1} << n;
    return SmallState(n, std::vector<Amplitude>(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
  }

  int qubits() const { return n_; }
  std::size_t dim() const { return amp_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amp_; }
  Amplitude operator[](std::size_t i) const { return amp_[i]; }

  double norm() const {
    double s = 0.0;
    for (auto a : amp_) s += std::norm(a);
    return std::sqrt(s);
  }

  void normalize() {
    const double nrm = norm();
    if (!(nrm > 0.0)) throw ShapeError("cannot normalize a zero state");
    for (auto& a : amp_) a /= nrm;
  }

  Amplitude inner(const SmallState& other) const {
    if (other.n_ != n_) throw SizeError("inner product of states with different qubit counts");
    Amplitude s{};
    for (std::size_t i = 0; i < amp_.size(); ++i) s += std::conj(amp_[i]) * other.amp_[i];
    return s;
  }

  /// |<this|other>|, insensitive to global phase.
  double fidelity(const SmallState& other) const { return std::abs(inner(other)); }

  void apply_cz(int a, int b) {
    check_qubit(a);
    check_qubit(b);
    const std::size_t mask = bit(a) | bit(b);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if ((i & mask) == mask) amp_[i] = -amp_[i];
    }
  }

  void apply_z(int q) {
    check_qubit(q);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & bit(q)) amp_[i] = -amp_[i];
    }
  }

  void apply_x(int q) {
    check_qubit(q);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (!(i & bit(q))) std::swap(amp_[i], amp_[i | bit(q)]);
    }
  }

  /// this (x) other, with `other` occupying the high qubits.
  SmallState tensor(const SmallState& other) const {
    const int total = n_ + other.n_;
    if (total > kMaxQubits) throw SizeError("combined state exceeds " + std::to_string(kMaxQubits) + " qubits");
    std::vector<Amplitude> out(std::size_t{1} << total);
    for (std::size_t hi = 0; hi < other.amp_.size(); ++hi) {
      for (std::size_t lo = 0; lo < amp_.size(); ++lo) out[(hi << n_) | lo] = amp_[lo] * other.amp_[hi];
    }
    return SmallState(total, std::move(out));
  }

  /// Unnormalized projection of qubit q onto <v|, removing the qubit.
  SmallState project_out(int q, Amplitude v0, Amplitude v1) const {
    check_qubit(q);
    std::vector<Amplitude> out(amp_.size() / 2);
    const std::size_t low_mask = bit(q) - 1;
    for (std::size_t j = 0; j < out.size(); ++j) {
      const std::size_t base = ((j & ~low_mask) << 1) | (j & low_mask);
      out[j] = std::conj(v0) * amp_[base] + std::conj(v1) * amp_[base | bit(q)];
    }
    SmallState s;
    s.n_ = n_ - 1;
    s.amp_ = std::move(out);
    return s;
  }

 private:
  static std::size_t bit(int q) { return std::size_t{1} << q; }
  void check_qubit(int q) const {
    if (q < 0 || q >= n_) throw SizeError("qubit index " + std::to_string(q) + " out of range");
  }

  int n_ = 0;
  std::vector<Amplitude> amp_{1.0};
};

/// Linear cluster state: |+>^n with CZ between neighbours.
inline SmallState make_linear_cluster(int n) {
  if (n < 1 || n > kMaxQubits) throw SizeError("chain length must lie in [1, 14], got " + std::to_string(n));
  SmallState s = SmallState::plus(n);
  for (int k = 0; k + 1 < n; ++k) s.apply_cz(k, k + 1);
  return s;
}

/// Graph state on n qubits with the given edges.
inline SmallState make_graph_state(int n, const std::vector<std::pair<int, int>>& edges) {
  SmallState s = SmallState::plus(n);
  for (auto [a, b] : edges) s.apply_cz(a, b);
  return s;
}

/// Largest deviation |K_v psi - psi| over the graph-state stabilizers
/// K_v = X_v prod_{w in N(v)} Z_w.
inline double graph_stabilizer_residual(const SmallState& psi, const std::vector<std::pair<int, int>>& edges) {
  double worst = 0.0;
  for (int v = 0; v < psi.qubits(); ++v) {
    SmallState k = psi;
    for (auto [a, b] : edges) {
      if (a == v) k.apply_z(b);
      if (b == v) k.apply_z(a);
    }
    k.apply_x(v);
    double d = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) d += std::norm(k[i] - psi[i]);
    worst = std::max(worst, std::sqrt(d));
  }
  return worst;
}

/// Single-qubit measurement basis {|m>, |m_perp>} with |m> = u0|0> + u1|1>.
struct QubitBasis {
  Amplitude u0{1.0};
  Amplitude u1{0.0};

  /// Basis vector for outcome 0 (|m>) or 1 (|m_perp>).
  std::pair<Amplitude, Amplitude> vector(int outcome) const {
    if (outcome == 0) return {u0, u1};
    return {-std::conj(u1), std::conj(u0)};
  }

  static QubitBasis computational() { return {}; }
};

/// Uniformly distributed point on the Bloch sphere.
inline QubitBasis random_basis(Rng& rng) {
  const double cos_theta = 2.0 * uniform01(rng) - 1.0;
  const double azimuth = 2.0 * std::numbers::pi * uniform01(rng);
  const double c = std::sqrt(0.5 * (1.0 + cos_theta));
  const double s = std::sqrt(std::max(0.0, 0.5 * (1.0 - cos_theta)));
  return {Amplitude(c, 0.0), std::polar(s, azimuth)};
}

struct Measurement {
  int outcome = 0;
  double probability = 0.0;
  SmallState post;  // remaining qubits, normalized (empty if probability is 0)
};

/// Projects qubit q on the given outcome of `basis` and removes it.
inline Measurement measure_outcome(const SmallState& s, int q, const QubitBasis& basis, int outcome) {
  const auto [v0, v1] = basis.vector(outcome);
  Measurement m{outcome, 0.0, s.project_out(q, v0, v1)};
  m.probability = m.post.norm() * m.post.norm();
  if (m.probability > 0.0) m.post.normalize();
  return m;
}

/// Born-rule sampled measurement of qubit q.
inline Measurement measure(const SmallState& s, int q, const QubitBasis& basis, Rng& rng) {
  Measurement zero = measure_outcome(s, q, basis, 0);
  if (uniform01(rng) < zero.probability) return zero;
  return measure_outcome(s, q, basis, 1);
}

/// Attaches a |+> qubit at the chain end with a successful CZ.
inline SmallState attach_success(const SmallState& chain) {
  if (chain.qubits() < 1 || chain.qubits() >= kMaxQubits) {
    throw SizeError("chain length must lie in [1, 13] to attach");
  }
  SmallState out = chain.tensor(SmallState::plus(1));
  out.apply_cz(chain.qubits() - 1, chain.qubits());
  return out;
}

/// One branch of the post-failure state: the chain end measured in `basis`.
struct FailureBranch {
  SmallState state;
  QubitBasis basis;
  int outcome = 0;
  double probability = 0.0;
};

inline FailureBranch fail_attach(const SmallState& chain, const QubitBasis& basis, int outcome) {
  if (chain.qubits() < 3 || chain.qubits() > kMaxQubits - 1) {
    throw SizeError("failure model needs a chain of 3 to 13 qubits");
  }
  auto m = measure_outcome(chain, chain.qubits() - 1, basis, outcome);
  return {std::move(m.post), basis, outcome, m.probability};
}

/// Attachment attempt. On failure the end qubit is measured in a uniformly
/// random basis, with the outcome drawn by the Born rule.
inline SmallState attach_attempt(const SmallState& chain, bool succeed, Rng& rng) {
  if (succeed) return attach_success(chain);
  if (chain.qubits() < 3 || chain.qubits() > kMaxQubits - 1) {
    throw SizeError("failure model needs a chain of 3 to 13 qubits");
  }
  const QubitBasis basis = random_basis(rng);
  return measure(chain, chain.qubits() - 1, basis, rng).post;
}

struct Recovery {
  SmallState state;
  int outcome = 0;
  double probability = 0.0;
  bool corrected = false;  // Z applied to the new chain end
};

namespace detail {

inline Recovery recover_branch(const SmallState& s, int outcome) {
  auto m = measure_outcome(s, s.qubits() - 1, QubitBasis::computational(), outcome);
  Recovery r{std::move(m.post), outcome, m.probability, false};
  if (outcome == 1 && r.probability > 0.0) {
    r.state.apply_z(r.state.qubits() - 1);
    r.corrected = true;
  }
  return r;
}

inline constexpr double kBranchTolerance = 1e-8;

}  // namespace detail

/// Recovers the chain after a failed attachment for a given outcome of the
/// computational-basis measurement of the last remaining qubit. Throws
/// ShapeError if the two corrected branches disagree, which means the input
/// is not a post-failure chain.
inline Recovery recover_failure(const SmallState& s, int outcome) {
  if (s.qubits() < 2) throw ShapeError("post-failure state needs at least two qubits");
  const Recovery r0 = detail::recover_branch(s, 0);
  const Recovery r1 = detail::recover_branch(s, 1);
  if (r0.probability > detail::kBranchTolerance && r1.probability > detail::kBranchTolerance &&
      std::abs(r0.state.fidelity(r1.state) - 1.0) > detail::kBranchTolerance) {
    throw ShapeError("state is not a recognized post-failure branch");
  }
  const Recovery& pick = outcome == 0 ? r0 : r1;
  if (!(pick.probability > 0.0)) throw ShapeError("requested outcome has zero probability");
  return pick;
}

inline Recovery recover_failure(const SmallState& s, Rng& rng) {
  if (s.qubits() < 2) throw ShapeError("post-failure state needs at least two qubits");
  const double p0 = detail::recover_branch(s, 0).probability;
  return recover_failure(s, uniform01(rng) < p0 ? 0 : 1);
}

/// Outcomes of breaking a chain at one qubit.
struct BreakOutcomes {
  QubitBasis basis;  // basis for the broken qubit
  int broken = 0;
  int left = 0;   // computational outcome of the left neighbour, if any
  int right = 0;  // computational outcome of the right neighbour, if any
};

struct BreakResult {
  std::optional<SmallState> left;   // qubits [0, i - 1)
  std::optional<SmallState> right;  // qubits (i + 1, n)
  std::vector<int> corrected;       // original indices that received a Z
  double probability = 0.0;         // joint probability of the outcomes
};

namespace detail {

/// Splits a product state into its low `k` qubits and the rest.
inline std::pair<SmallState, SmallState> factor_product(const SmallState& s, int k) {
  const int hi_n = s.qubits() - k;
  const std::size_t lo_dim = std::size_t{1} << k;
  const std::size_t hi_dim = std::size_t{1} << hi_n;
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t h = 0; h < hi_dim; ++h) {
    double nrm = 0.0;
    for (std::size_t l = 0; l < lo_dim; ++l) nrm += std::norm(s[(h << k) | l]);
    if (nrm > best_norm) {
      best_norm = nrm;
      best = h;
    }
  }
  std::vector<Amplitude> lo(lo_dim);
  for (std::size_t l = 0; l < lo_dim; ++l) lo[l] = s[(best << k) | l];
  SmallState low(k, std::move(lo));
  low.normalize();
  std::vector<Amplitude> hi(hi_dim);
  double resid = 0.0;
  for (std::size_t h = 0; h < hi_dim; ++h) {
    Amplitude c{};
    for (std::size_t l = 0; l < lo_dim; ++l) c += std::conj(low[l]) * s[(h << k) | l];
    hi[h] = c;
    for (std::size_t l = 0; l < lo_dim; ++l) resid += std::norm(s[(h << k) | l] - c * low[l]);
  }
  if (std::sqrt(resid) > 1e-9) throw ShapeError("fragments are not in a product state");
  SmallState high(hi_n, std::move(hi));
  high.normalize();
  return {std::move(low), std::move(high)};
}

}  // namespace detail

/// Measures qubit i of a chain in `o.basis`, then its existing neighbours in
/// the computational basis, and applies Z to qubits i - 2 and i + 2 when the
/// corresponding neighbour reads 1. What remains factorizes into up to two
/// chains: [0, i - 1) and (i + 1, n).
inline BreakResult break_chain(const SmallState& chain, int i, const BreakOutcomes& o) {
  const int n = chain.qubits();
  if (i < 0 || i >= n) throw SizeError("break index out of range");
  const bool has_left = i - 1 >= 0;
  const bool has_right = i + 1 < n;

  // Measure from the highest index down so lower indices stay valid.
  BreakResult out;
  double prob = 1.0;
  SmallState s = chain;
  auto step = [&](int q, const QubitBasis& b, int outcome) {
    auto m = measure_outcome(s, q, b, outcome);
    prob *= m.probability;
    if (!(m.probability > 0.0)) throw ShapeError("measurement outcome has zero probability");
    s = std::move(m.post);
  };
  if (has_right) step(i + 1, QubitBasis::computational(), o.right);
  step(i, o.basis, o.broken);
  if (has_left) step(i - 1, QubitBasis::computational(), o.left);
  out.probability = prob;

  // s now holds qubits [0, i-1) followed by (i+1, n).
  const int left_n = std::max(0, i - 1);
  if (has_left && o.left == 1 && i - 2 >= 0) {
    s.apply_z(i - 2);
    out.corrected.push_back(i - 2);
  }
  if (has_right && o.right == 1 && i + 2 < n) {
    s.apply_z(left_n);
    out.corrected.push_back(i + 2);
  }
  const int right_n = s.qubits() - left_n;
  if (left_n > 0 && right_n > 0) {
    auto [l, r] = detail::factor_product(s, left_n);
    out.left = std::move(l);
    out.right = std::move(r);
  } else if (left_n > 0) {
    out.left = std::move(s);
  } else if (right_n > 0) {
    out.right = std::move(s);
  }
  return out;
}

/// Sampled version of break_chain with a uniformly random basis for qubit i.
inline BreakResult break_chain(const SmallState& chain, int i, Rng& rng) {
  const int n = chain.qubits();
  if (i < 0 || i >= n) throw SizeError("break index out of range");
  BreakOutcomes o;
  o.basis = random_basis(rng);
  SmallState s = chain;
  // Sample in physical order: the broken qubit first, then its neighbours.
  auto mi = measure(s, i, o.basis, rng);
  o.broken = mi.outcome;
  s = mi.post;
  if (i - 1 >= 0) {
    auto ml = measure(s, i - 1, QubitBasis::computational(), rng);
    o.left = ml.outcome;
    s = ml.post;
  }
  if (i + 1 < n) {
    // index shifted down by the removed qubits i and i - 1
    const int shifted = i + 1 - 1 - (i - 1 >= 0 ? 1 : 0);
    o.right = measure(s, shifted, QubitBasis::computational(), rng).outcome;
  }
  return break_chain(chain, i, o);
}

struct SplitResult {
  SmallState left;
  SmallState right;
  std::vector<int> corrected;
  double probability = 0.0;
};

/// Splits a chain at interior qubit i (zero-based, 2 <= i <= n - 3) into
/// chains of i - 1 and n - i - 2 qubits.
inline SplitResult split_measure(const SmallState& chain, int i, const BreakOutcomes& o) {
  const int n = chain.qubits();
  if (i < 2 || i > n - 3) {
    throw SizeError("split index " + std::to_string(i) + " would leave an empty fragment");
  }
  auto b = break_chain(chain, i, o);
  return {std::move(*b.left), std::move(*b.right), std::move(b.corrected), b.probability};
}

inline SplitResult split_measure(const SmallState& chain, int i, Rng& rng) {
  const int n = chain.qubits();
  if (i < 2 || i > n - 3) {
    throw SizeError("split index " + std::to_string(i) + " would leave an empty fragment");
  }
  auto b = break_chain(chain, i, rng);
  return {std::move(*b.left), std::move(*b.right), std::move(b.corrected), b.probability};
}

struct JoinResult {
  bool joined = false;
  SmallState state;                  // A (x) B with the new bond, when joined
  std::vector<SmallState> fragments;  // recovered chains, when not joined
};

/// Bonds qubit a of chain A to qubit b of chain B. B occupies the high
/// qubits of the joined state, so b maps to index |A| + b. On failure both
/// target qubits are measured in random bases and each chain is broken
/// there, leaving up to four linear fragments.
inline JoinResult join_cross(const SmallState& chainA, const SmallState& chainB, int a, int b,
                             bool succeed, Rng& rng) {
  if (chainA.qubits() + chainB.qubits() > kMaxQubits) {
    throw SizeError("joined state exceeds " + std::to_string(kMaxQubits) + " qubits");
  }
  if (a < 0 || a >= chainA.qubits() || b < 0 || b >= chainB.qubits()) {
    throw SizeError("join index out of range");
  }
  JoinResult out;
  if (succeed) {
    out.joined = true;
    out.state = chainA.tensor(chainB);
    out.state.apply_cz(a, chainA.qubits() + b);
    return out;
  }
  for (auto [chain, q] : {std::pair{&chainA, a}, std::pair{&chainB, b}}) {
    auto r = break_chain(*chain, q, rng);
    if (r.left) out.fragments.push_back(std::move(*r.left));
    if (r.right) out.fragments.push_back(std::move(*r.right));
  }
  return out;
}

/// Edges of two linear chains of lengths na and nb bonded at (a, b).
inline std::vector<std::pair<int, int>> cross_edges(int na, int nb, int a, int b) {
  std::vector<std::pair<int, int>> e;
  for (int k = 0; k + 1 < na; ++k) e.emplace_back(k, k + 1);
  for (int k = 0; k + 1 < nb; ++k) e.emplace_back(na + k, na + k + 1);
  e.emplace_back(a, na + b);
  return e;
}

// ---------------------------------------------------------------------------
// Length bookkeeping

struct ChainEvent {
  std::int64_t attempt = 0;
  bool success = false;
  std::int64_t length_after = 0;
};

/// One growing chain. `length` is floored at zero; `net_change` is the
/// unclamped sum of increments.
struct ChainRecord {
  std::int64_t length = 0;
  std::int64_t net_change = 0;
  bool hit_floor = false;
  std::vector<ChainEvent> history;
};

inline ChainRecord simulate_chain(double P, std::int64_t m, Rng& rng, std::int64_t initial_length = 10,
                                  bool keep_history = false) {
  ChainRecord rec;
  rec.length = initial_length;
  if (keep_history) rec.history.reserve(static_cast<std::size_t>(m));
  for (std::int64_t k = 0; k < m; ++k) {
    const bool ok = uniform01(rng) < P;
    if (ok) {
      rec.length += 1;
      rec.net_change += 1;
    } else {
      rec.net_change -= 2;
      rec.length -= 2;
      if (rec.length <= 0) {
        rec.length = 0;
        rec.hit_floor = true;
      }
    }
    if (keep_history) rec.history.push_back({k, ok, rec.length});
  }
  return rec;
}

struct GrowthStats {
  std::int64_t n_trials = 0;
  std::int64_t m = 0;
  double P = 0.0;
  std::uint64_t seed = 0;
  double mean_delta = 0.0;  // mean net length change per trial
  double std_err = 0.0;     // standard error of mean_delta
  std::int64_t floor_hits = 0;

  /// Expected net change (3P - 2) m.
  double expected() const { return (3.0 * P - 2.0) * static_cast<double>(m); }
};

/// Monte Carlo of the add-on strategy. Deterministic in `seed`; trial t draws
/// from derived_rng(seed, t).
inline GrowthStats monte_carlo_growth(double P, std::int64_t m, std::int64_t n_trials, std::uint64_t seed,
                                      std::int64_t initial_length = 10) {
  if (!(P >= 0.0 && P <= 1.0)) throw DomainError("success probability must lie in [0, 1]");
  if (m < 1 || n_trials < 1) throw DomainError("m and n_trials must be at least 1");
  if (initial_length < 0) throw DomainError("initial chain length must be non-negative");
  const auto trials = parallel_map<ChainRecord>(static_cast<std::size_t>(n_trials), [&](std::size_t t) {
    Rng rng = derived_rng(seed, t);
    return simulate_chain(P, m, rng, initial_length);
  });
  GrowthStats g{n_trials, m, P, seed, 0.0, 0.0, 0};
  double sum = 0.0;
  for (const auto& t : trials) {
    sum += static_cast<double>(t.net_change);
    if (t.hit_floor) ++g.floor_hits;
  }
  g.mean_delta = sum / static_cast<double>(n_trials);
  if (n_trials > 1) {
    double ss = 0.0;
    for (const auto& t : trials) {
      const double d = static_cast<double>(t.net_change) - g.mean_delta;
      ss += d * d;
    }
    g.std_err = std::sqrt(ss / static_cast<double>(n_trials - 1) / static_cast<double>(n_trials));
  }
  return g;
}

}  // namespace cavitycz
