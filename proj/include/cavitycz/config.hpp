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

/// Plain-text key=value configuration: one entry per line, `#` starts a
/// comment, blank lines are ignored.
#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cavitycz/csv.hpp"
#include "cavitycz/errors.hpp"
#include "cavitycz/physics.hpp"

namespace cavitycz {

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

using ConfigEntries = std::map<std::string, std::string>;

/// Parses key=value lines. Keys outside `allowed` and duplicate keys are
/// rejected with the offending line number.
inline ConfigEntries parse_config(std::istream& in, const std::set<std::string>& allowed) {
  ConfigEntries out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = detail::trim(std::string_view(body).substr(0, eq));
    std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!allowed.contains(key)) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!out.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

inline double parse_finite(std::string_view key, std::string_view text) {
  const std::string t = detail::trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ConfigError("'" + std::string(key) + "' expects a finite number, got '" + t + "'");
  }
  return v;
}

/// A list of values: "a,b,c" or an inclusive range "start:stop:step".
inline std::vector<double> parse_list(std::string_view key, std::string_view text) {
  const std::string t = detail::trim(text);
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_finite(key, item));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw ConfigError("'" + std::string(key) + "' range must be start:stop:step with step > 0");
    }
    const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(parts[0] + static_cast<double>(k) * parts[2]);
    return out;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_finite(key, item));
  if (out.empty()) throw ConfigError("'" + std::string(key) + "' needs at least one value");
  return out;
}

/// Physical setup of one reflection run.
struct PhysicsConfig {
  CavityParams params;
  double T_f = 50.0;
  GridSettings grid;
};

inline const std::set<std::string>& physics_keys() {
  static const std::set<std::string> keys{"g0", "kappa_l", "gamma", "T_f", "T_g", "phi", "dt", "window"};
  return keys;
}

/// Applies the physics keys present in `entries`; other keys are ignored.
inline void apply_physics(const ConfigEntries& entries, PhysicsConfig& cfg) {
  auto set = [&](const char* key, double& dst) {
    if (auto it = entries.find(key); it != entries.end()) dst = parse_finite(key, it->second);
  };
  set("g0", cfg.params.g0);
  set("kappa_l", cfg.params.kappa_l);
  set("gamma", cfg.params.gamma);
  set("T_f", cfg.T_f);
  set("T_g", cfg.params.T_g);
  set("phi", cfg.params.phi);
  set("dt", cfg.grid.dt);
  set("window", cfg.grid.window);
}

/// Serializes a physics setup in the key=value format.
inline std::string to_config_text(const PhysicsConfig& cfg) {
  std::ostringstream out;
  out << "g0=" << format_number(cfg.params.g0) << '\n'
      << "kappa_l=" << format_number(cfg.params.kappa_l) << '\n'
      << "gamma=" << format_number(cfg.params.gamma) << '\n'
      << "T_f=" << format_number(cfg.T_f) << '\n'
      << "T_g=" << format_number(cfg.params.T_g) << '\n'
      << "phi=" << format_number(cfg.params.phi) << '\n'
      << "dt=" << format_number(cfg.grid.dt) << '\n'
      << "window=" << format_number(cfg.grid.window) << '\n';
  return out.str();
}

inline PhysicsConfig physics_from_text(const std::string& text) {
  std::istringstream in(text);
  PhysicsConfig cfg;
  apply_physics(parse_config(in, physics_keys()), cfg);
  return cfg;
}

}  // namespace cavitycz

