// Copyright 2026 The deltaline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "deltaline/core.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>

namespace deltaline {

using Json = nlohmann::json;

struct Config {
  AtomParams atom;
  DriveConfig drives;
};

namespace detail {

inline void check_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected a JSON object");
}

inline void reject_unknown_keys(const Json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(path + "/" + key, "unknown key");
  }
}

inline double get_number(const Json& obj, const std::string& path, const char* key,
                         std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(path + "/" + key, "missing required key");
  }
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "/" + key, "expected a number");
  return v.get<double>();
}

inline RabiField get_rabi(const Json& obj, const std::string& path, const char* key,
                          bool required) {
  if (!obj.contains(key)) {
    if (!required) return RabiField{};
    throw ConfigError(path + "/" + key, "missing required key");
  }
  const std::string sub = path + "/" + key;
  const Json& v = obj.at(key);
  check_object(v, sub);
  reject_unknown_keys(v, sub, {"mag_mhz", "phase_rad"});
  RabiField f;
  f.mag = get_number(v, sub, "mag_mhz");
  f.phase = get_number(v, sub, "phase_rad", 0.0);
  if (f.mag < 0.0) throw ConfigError(sub + "/mag_mhz", "magnitude must be non-negative");
  return f;
}

inline std::size_t line_of_byte(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

} // namespace detail

/// Parses the simulator configuration object:
///   { "atom": { gamma_pop_*, gamma_coh_*, omega_21, omega_32, line_impedance },
///     "drives": { rabi_31, rabi_32, rabi_21: {mag_mhz, phase_rad},
///                 detuning_31_mhz, detuning_32_mhz } }
/// Unknown keys are rejected. gamma_pop_31 defaults to 0, gamma_coh_13/23 to
/// gamma_pop_32/2, the probe to off, detunings to 0.
inline Config parse_config(const Json& j, const std::string& path = "") {
  detail::check_object(j, path);
  detail::reject_unknown_keys(j, path, {"atom", "drives"});
  if (!j.contains("atom")) throw ConfigError(path + "/atom", "missing required key");
  if (!j.contains("drives")) throw ConfigError(path + "/drives", "missing required key");

  Config cfg;
  {
    const std::string ap = path + "/atom";
    const Json& a = j.at("atom");
    detail::check_object(a, ap);
    detail::reject_unknown_keys(a, ap,
                                {"gamma_pop_31", "gamma_pop_32", "gamma_pop_21",
                                 "gamma_coh_12", "gamma_coh_13", "gamma_coh_23",
                                 "omega_21", "omega_32", "line_impedance"});
    cfg.atom.gamma_pop_31 = detail::get_number(a, ap, "gamma_pop_31", 0.0);
    cfg.atom.gamma_pop_32 = detail::get_number(a, ap, "gamma_pop_32");
    cfg.atom.gamma_pop_21 = detail::get_number(a, ap, "gamma_pop_21");
    cfg.atom.gamma_coh_12 = detail::get_number(a, ap, "gamma_coh_12");
    cfg.atom.gamma_coh_13 =
        detail::get_number(a, ap, "gamma_coh_13", cfg.atom.gamma_pop_32 / 2.0);
    cfg.atom.gamma_coh_23 =
        detail::get_number(a, ap, "gamma_coh_23", cfg.atom.gamma_pop_32 / 2.0);
    cfg.atom.omega_21 = detail::get_number(a, ap, "omega_21");
    cfg.atom.omega_32 = detail::get_number(a, ap, "omega_32");
    cfg.atom.line_impedance = detail::get_number(a, ap, "line_impedance");
  }
  {
    const std::string dp = path + "/drives";
    const Json& d = j.at("drives");
    detail::check_object(d, dp);
    detail::reject_unknown_keys(d, dp, {"rabi_31", "rabi_32", "rabi_21",
                                        "detuning_31_mhz", "detuning_32_mhz"});
    cfg.drives.rabi_31 = detail::get_rabi(d, dp, "rabi_31", /*required=*/true);
    cfg.drives.rabi_32 = detail::get_rabi(d, dp, "rabi_32", /*required=*/true);
    cfg.drives.rabi_21 = detail::get_rabi(d, dp, "rabi_21", /*required=*/false);
    cfg.drives.detuning_31 = detail::get_number(d, dp, "detuning_31_mhz", 0.0);
    cfg.drives.detuning_32 = detail::get_number(d, dp, "detuning_32_mhz", 0.0);
  }
  return cfg;
}

inline Json config_to_json(const Config& cfg) {
  auto rabi = [](const RabiField& r) {
    return Json{{"mag_mhz", r.mag}, {"phase_rad", r.phase}};
  };
  return Json{
      {"atom",
       {{"gamma_pop_31", cfg.atom.gamma_pop_31},
        {"gamma_pop_32", cfg.atom.gamma_pop_32},
        {"gamma_pop_21", cfg.atom.gamma_pop_21},
        {"gamma_coh_12", cfg.atom.gamma_coh_12},
        {"gamma_coh_13", cfg.atom.gamma_coh_13},
        {"gamma_coh_23", cfg.atom.gamma_coh_23},
        {"omega_21", cfg.atom.omega_21},
        {"omega_32", cfg.atom.omega_32},
        {"line_impedance", cfg.atom.line_impedance}}},
      {"drives",
       {{"rabi_31", rabi(cfg.drives.rabi_31)},
        {"rabi_32", rabi(cfg.drives.rabi_32)},
        {"rabi_21", rabi(cfg.drives.rabi_21)},
        {"detuning_31_mhz", cfg.drives.detuning_31},
        {"detuning_32_mhz", cfg.drives.detuning_32}}}};
}

/// Reads and parses a JSON document; parse failures are reported with the
/// line they occur on.
inline Json load_json_file(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw ConfigError(filename, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(filename + ":" + std::to_string(detail::line_of_byte(text, e.byte)),
                      e.what());
  }
}

/// Loads, parses and validates a simulator configuration file.
inline Config load_config_file(const std::string& filename) {
  const Config cfg = parse_config(load_json_file(filename), filename);
  const ValidationReport rep = validate(cfg.atom, cfg.drives);
  if (!rep.ok()) {
    std::string msg = "invalid configuration:";
    for (const auto& v : rep.violations) msg += "\n  - " + v;
    throw ConfigError(filename, msg);
  }
  return cfg;
}

} // namespace deltaline
