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

// Simulates both reflection cases for one cavity, feeds the measured branch
// probabilities into the idealized gate, and compares with full envelope
// propagation through the two-cavity network.
#include <iostream>

#include "cavitycz/cavitycz.hpp"

int main() {
  using namespace cavitycz;

  CavityParams p;
  p.kappa_l = 0.1;
  p.gamma = 1.0;
  p.g0 = peak_for_mean_coupling(2.0);
  p.T_g = 125.0;

  const double T_f = 50.0;
  const auto pulse = make_sech_pulse(T_f, make_grid(p, T_f));
  const auto bare = reflect_bare(p, pulse);
  const auto coupled = reflect_coupled(p, pulse);
  std::cout << "P0=" << format_number(bare.P) << " F0=" << format_number(bare.F)
            << " phase0=" << format_number(bare.phase) << '\n'
            << "P1=" << format_number(coupled.P) << " F1=" << format_number(coupled.F)
            << " phase1=" << format_number(coupled.phase) << '\n';

  const auto ideal = two_cavity_gate(BranchReflectivities::make(bare.P, coupled.P / bare.P));
  const auto sim = gate_from_simulation(p, p, pulse).outcome;
  std::cout << "ideal:     P=" << format_number(ideal.P_total) << " F_avg=" << format_number(ideal.F_avg) << '\n'
            << "simulated: P=" << format_number(sim.P_total) << " F_avg=" << format_number(sim.F_avg) << '\n';
}
