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

// Command-line front end. Kept in a header so tests can drive it in-process.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cavitycz/cavitycz.hpp"

namespace cavitycz::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kNumericalError = 3 };

/// Flag name to config key. Every flag may also be given in a --config file.
inline const std::map<std::string, std::string>& flag_keys() {
  static const std::map<std::string, std::string> m{
      {"--case", "case"},   {"--g0", "g0"},         {"--kappa-l", "kappa_l"}, {"--gamma", "gamma"},
      {"--Tf", "T_f"},      {"--Tg", "T_g"},        {"--phi", "phi"},         {"--n-phi", "n_phi"},
      {"--P0", "P0"},       {"--r", "r"},           {"--P", "P"},             {"--m", "m"},
      {"--trials", "trials"}, {"--seed", "seed"},   {"--dt", "dt"},           {"--window", "window"},
  };
  return m;
}

inline std::set<std::string> config_keys() {
  std::set<std::string> keys;
  for (const auto& [flag, key] : flag_keys()) keys.insert(key);
  return keys;
}

/// Resolved settings: defaults, overridden by the config file, overridden by
/// flags.
class Settings {
 public:
  explicit Settings(std::map<std::string, std::string> defaults) : values_(std::move(defaults)) {}

  void overlay(const std::map<std::string, std::string>& more) {
    for (const auto& [k, v] : more) values_[k] = v;
  }

  bool has(const std::string& key) const { return values_.contains(key); }

  const std::string& text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing setting '" + key + "'");
    return it->second;
  }

  double number(const std::string& key) const { return parse_finite(key, text(key)); }

  std::int64_t integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) throw ConfigError("'" + key + "' expects an integer");
    return static_cast<std::int64_t>(v);
  }

  std::vector<double> list(const std::string& key) const { return parse_list(key, text(key)); }

  /// "key=value ..." in key order, for CSV provenance comments.
  std::string describe(const std::string& command) const {
    std::string s = "command=" + command;
    for (const auto& [k, v] : values_) s += " " + k + "=" + v;
    return s;
  }

 private:
  std::map<std::string, std::string> values_;
};

struct SubcommandFlags {
  std::map<std::string, std::string> storage;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  std::string out_path;
  std::string required;  // flag that must come from the command line or the config file
};

inline void add_flags(CLI::App* app, SubcommandFlags& f, const std::vector<std::string>& flags,
                      const std::string& required = {}) {
  for (const auto& flag : flags) {
    const std::string key = flag_keys().at(flag);
    f.options[key] = app->add_option(flag, f.storage[key]);
  }
  f.required = required;
  app->add_option("--config", f.config_path, "key=value configuration file");
  app->add_option("--out", f.out_path, "output path");
}

inline Settings resolve(const SubcommandFlags& f, std::map<std::string, std::string> defaults) {
  Settings s(std::move(defaults));
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw ConfigError("cannot read config file " + f.config_path);
    s.overlay(parse_config(in, config_keys()));
  }
  std::map<std::string, std::string> given;
  for (const auto& [key, opt] : f.options) {
    if (opt->count() > 0) given[key] = f.storage.at(key);
  }
  s.overlay(given);
  if (!f.required.empty() && !s.has(flag_keys().at(f.required))) {
    throw ConfigError(f.required + " is required (or set '" + flag_keys().at(f.required) + "' in --config)");
  }
  return s;
}

inline PhysicsConfig physics_of(const Settings& s) {
  PhysicsConfig cfg;
  cfg.params.g0 = s.number("g0");
  cfg.params.kappa_l = s.number("kappa_l");
  cfg.params.gamma = s.number("gamma");
  cfg.params.T_g = s.number("T_g");
  cfg.params.phi = s.number("phi");
  cfg.T_f = s.number("T_f");
  cfg.grid.dt = s.number("dt");
  cfg.grid.window = s.number("window");
  cfg.params.validate();
  return cfg;
}

inline ReflectionCase case_of(const std::string& text) {
  if (text == "bare") return ReflectionCase::kBare;
  if (text == "coupled") return ReflectionCase::kCoupled;
  throw ConfigError("--case must be 'bare' or 'coupled', got '" + text + "'");
}

inline std::map<std::string, std::string> physics_defaults() {
  return {{"g0", "0"},   {"kappa_l", "0"}, {"gamma", "1"}, {"T_f", "50"}, {"T_g", "50"},
          {"phi", "0"},  {"dt", "0"},      {"window", "8"}};
}

/// Writes through `sink` either to --out or to the given stream.
template <typename Sink>
void emit(const std::string& path, std::ostream& fallback, Sink&& sink) {
  if (path.empty() || path == "-") {
    sink(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::ios_base::failure("cannot open output file " + path);
  sink(file);
  if (!file) throw std::ios_base::failure("write failed for " + path);
}

inline void print_record(std::ostream& out, double P, double F, double phase, double loss_atom,
                         double loss_cavity, double occupation) {
  out << "P=" << format_number(P) << '\n'
      << "F=" << format_number(F) << '\n'
      << "phase=" << format_number(phase) << '\n'
      << "loss_atom=" << format_number(loss_atom) << '\n'
      << "loss_cavity=" << format_number(loss_cavity) << '\n'
      << "cavity_occupation=" << format_number(occupation) << '\n'
      << "flux_residual=" << format_number(1.0 - P - loss_atom - loss_cavity) << '\n';
}

inline int run_reflect(const SubcommandFlags& f, std::ostream& out) {
  auto d = physics_defaults();
  const Settings s = resolve(f, d);
  const auto cfg = physics_of(s);
  const auto which = case_of(s.text("case"));
  const auto pulse = make_sech_pulse(cfg.T_f, make_grid(cfg.params, cfg.T_f, cfg.grid));
  out << "case=" << to_string(which) << '\n';
  if (which == ReflectionCase::kCoupled && s.has("n_phi")) {
    const auto n_phi = static_cast<int>(s.integer("n_phi"));
    const auto avg = reflect_coupled_motion_averaged(cfg.params, pulse, n_phi);
    out << "n_phi=" << n_phi << '\n';
    print_record(out, avg.P, avg.F, avg.phase, avg.loss_atom, avg.loss_cavity, avg.cavity_occupation);
    return kOk;
  }
  const auto rec = reflect(cfg.params, pulse, which);
  print_record(out, rec.P, rec.F, rec.phase, rec.loss_atom, rec.loss_cavity, rec.cavity_occupation);
  if (!f.out_path.empty()) {
    emit(f.out_path, out, [&](std::ostream& o) {
      write_csv_comment(o, s.describe("reflect"));
      o << "t,f_in_re,f_in_im,f_out_re,f_out_im\n";
      for (std::size_t i = 0; i < pulse.samples.size(); ++i) {
        o << format_number(pulse.grid.at(i)) << ',' << format_number(pulse.samples[i].real()) << ','
          << format_number(pulse.samples[i].imag()) << ',' << format_number(rec.f_out.samples[i].real()) << ','
          << format_number(rec.f_out.samples[i].imag()) << '\n';
      }
    });
  }
  return kOk;
}

inline void print_outcome(std::ostream& out, const GateOutcome& g) {
  auto state = [&](const char* name, const TwoQubitState& psi) {
    out << name << '=';
    for (std::size_t i = 0; i < 4; ++i) {
      out << (i ? " " : "") << format_number(psi.amp[i].real());
      if (psi.amp[i].imag() != 0.0) out << (psi.amp[i].imag() < 0 ? "" : "+") << format_number(psi.amp[i].imag()) << 'i';
    }
    out << '\n';
  };
  out << "P_L=" << format_number(g.P_L) << '\n'
      << "P_R=" << format_number(g.P_R) << '\n'
      << "P_total=" << format_number(g.P_total) << '\n'
      << "F_L=" << format_number(g.F_L) << '\n'
      << "F_R=" << format_number(g.F_R) << '\n'
      << "F_avg=" << format_number(g.F_avg) << '\n';
  state("psi_L", g.psi_L);
  state("psi_R_raw", g.psi_R_raw);
  state("psi_R", g.psi_R);
}

inline int run_gate(const SubcommandFlags& f, std::ostream& out) {
  auto d = physics_defaults();
  d["case"] = "ideal";
  d["P0"] = "1";
  d["r"] = "1";
  const Settings s = resolve(f, d);
  const std::string mode = s.text("case");
  if (mode == "ideal") {
    const auto b = BranchReflectivities::make(s.number("P0"), s.number("r"));
    const auto g = two_cavity_gate(b);
    print_outcome(out, g);
    out << "oracle_deviation=" << format_number(outcome_distance(g, circuit_oracle(b))) << '\n';
    if (!f.out_path.empty()) {
      emit(f.out_path, out, [&](std::ostream& o) {
        write_csv_comment(o, s.describe("gate"));
        write_gate_csv(o, {{b.P0, b.r, g}});
      });
    }
    return kOk;
  }
  if (mode != "simulate") throw ConfigError("gate --case must be 'ideal' or 'simulate', got '" + mode + "'");
  const auto cfg = physics_of(s);
  const auto pulse = make_sech_pulse(cfg.T_f, make_grid(cfg.params, cfg.T_f, cfg.grid));
  const auto sim = gate_from_simulation(cfg.params, cfg.params, pulse);
  const auto bare = reflect_bare(cfg.params, pulse);
  const auto cpl = reflect_coupled(cfg.params, pulse);
  out << "P0=" << format_number(bare.P) << '\n' << "r=" << format_number(cpl.P / bare.P) << '\n';
  print_outcome(out, sim.outcome);
  return kOk;
}

inline int run_sweep(const SubcommandFlags& f, std::ostream& out) {
  auto d = physics_defaults();
  d["n_phi"] = "16";
  const Settings s = resolve(f, d);
  SweepSpec spec;
  spec.which = case_of(s.text("case"));
  spec.g0 = s.list("g0");
  spec.kappa_l = s.list("kappa_l");
  spec.gamma = s.list("gamma");
  spec.T_f = s.list("T_f");
  spec.T_g = s.list("T_g");
  spec.n_phi.clear();
  for (double v : s.list("n_phi")) {
    if (v != std::floor(v) || v < 1) throw ConfigError("'n_phi' expects positive integers");
    spec.n_phi.push_back(static_cast<int>(v));
  }
  spec.phi = s.number("phi");
  spec.grid.dt = s.number("dt");
  spec.grid.window = s.number("window");
  const auto rows = sweep(spec);
  emit(f.out_path, out, [&](std::ostream& o) {
    write_csv_comment(o, s.describe("sweep"));
    write_sweep_csv(o, rows);
  });
  return kOk;
}

inline constexpr std::string_view kGrowthHeader = "P,m,n_trials,seed,mean_delta,std_err,floor_hits";

inline int run_cluster(const SubcommandFlags& f, std::ostream& out) {
  const Settings s = resolve(f, {{"P", "0.8"}, {"m", "10000"}, {"trials", "200"}, {"seed", "1"}});
  const auto probs = s.list("P");
  const auto m = s.integer("m");
  const auto trials = s.integer("trials");
  const auto seed = s.integer("seed");
  if (seed < 0) throw ConfigError("'seed' must be non-negative");
  std::vector<GrowthStats> stats;
  for (double P : probs) stats.push_back(monte_carlo_growth(P, m, trials, static_cast<std::uint64_t>(seed)));
  emit(f.out_path, out, [&](std::ostream& o) {
    write_csv_comment(o, s.describe("cluster"));
    o << kGrowthHeader << '\n';
    for (const auto& g : stats) {
      o << format_number(g.P) << ',' << g.m << ',' << g.n_trials << ',' << g.seed << ','
        << format_number(g.mean_delta) << ',' << format_number(g.std_err) << ',' << g.floor_hits << '\n';
    }
  });
  return kOk;
}

inline int run_verify(const std::string& suite, std::ostream& out) {
  std::vector<Check> checks;
  auto add = [&](std::vector<Check> more) { checks.insert(checks.end(), more.begin(), more.end()); };
  const bool all = suite == "all";
  if (all || suite == "flux") add(verify_flux());
  if (all || suite == "oracle") add(verify_oracle());
  if (all || suite == "recovery") add(verify_recovery());
  if (all || suite == "growth") add(verify_growth());
  if (all || suite == "twosided") add(verify_two_sided());
  write_report(out, checks);
  const auto failed = std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; });
  out << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " checks passed\n";
  return failed == 0 ? kOk : kVerifyFailed;
}

inline int run_figures(const std::string& which, const SubcommandFlags& f, std::ostream& out) {
  const Settings s = resolve(f, {{"n_phi", "16"}, {"P0", "1"}});
  const std::filesystem::path dir = f.out_path.empty() ? "." : f.out_path;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::ios_base::failure("cannot create output directory " + dir.string());
  const bool all = which == "all";
  auto write = [&](const std::string& name, auto&& body) {
    const auto path = (dir / (name + ".csv")).string();
    emit(path, out, [&](std::ostream& o) {
      write_csv_comment(o, s.describe("figures") + " figure=" + name);
      body(o);
    });
    out << "wrote " << path << '\n';
  };
  if (all || which == "fig2") write("fig2", [](std::ostream& o) { write_sweep_csv(o, sweep(fig2_spec())); });
  if (all || which == "fig3") {
    const auto n_phi = static_cast<int>(s.integer("n_phi"));
    write("fig3", [n_phi](std::ostream& o) { write_sweep_csv(o, sweep(fig3_spec(n_phi))); });
  }
  if (all || which == "fig5") {
    const double P0 = s.number("P0");
    write("fig5", [P0](std::ostream& o) { write_gate_csv(o, gate_sweep(P0, fig5_r_values())); });
  }
  return kOk;
}

/// Parses and runs one invocation; returns the process exit code.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cavity-mediated controlled-phase gate and cluster-growth simulator", "cavitycz"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  SubcommandFlags reflect_f, gate_f, sweep_f, cluster_f, figures_f;
  const std::vector<std::string> physics{"--g0", "--kappa-l", "--gamma", "--Tf", "--Tg", "--phi", "--dt", "--window"};

  auto* reflect = app.add_subcommand("reflect", "reflect one photon off a bare or coupled cavity");
  auto reflect_flags = physics;
  reflect_flags.insert(reflect_flags.end(), {"--case", "--n-phi"});
  add_flags(reflect, reflect_f, reflect_flags, "--case");

  auto* gate = app.add_subcommand("gate", "two-cavity controlled-phase gate (ideal or simulated)");
  auto gate_flags = physics;
  gate_flags.insert(gate_flags.end(), {"--case", "--P0", "--r"});
  add_flags(gate, gate_f, gate_flags);

  auto* sweep_cmd = app.add_subcommand("sweep", "Cartesian parameter sweep to CSV");
  auto sweep_flags = physics;
  sweep_flags.insert(sweep_flags.end(), {"--case", "--n-phi"});
  add_flags(sweep_cmd, sweep_f, sweep_flags, "--case");

  auto* cluster = app.add_subcommand("cluster", "Monte Carlo cluster growth statistics");
  add_flags(cluster, cluster_f, {"--P", "--m", "--trials", "--seed"});

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "flux | oracle | recovery | growth | twosided | all")
      ->required()
      ->check(CLI::IsMember({"flux", "oracle", "recovery", "growth", "twosided", "all"}));

  std::string figure;
  auto* figures = app.add_subcommand("figures", "write figure data as CSV into --out");
  figures->add_option("which", figure, "fig2 | fig3 | fig5 | all")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig5", "all"}));
  add_flags(figures, figures_f, {"--n-phi", "--P0"});

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*reflect) return run_reflect(reflect_f, out);
    if (*gate) return run_gate(gate_f, out);
    if (*sweep_cmd) return run_sweep(sweep_f, out);
    if (*cluster) return run_cluster(cluster_f, out);
    if (*verify) return run_verify(suite, out);
    if (*figures) return run_figures(figure, figures_f, out);
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace cavitycz::cli
