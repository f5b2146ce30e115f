/* Copyright 2026 The WaveAugment Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef WAVEAUG_CONFIG_HPP_
#define WAVEAUG_CONFIG_HPP_

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "waveaug/augment.hpp"
#include "waveaug/error.hpp"
#include "waveaug/room.hpp"
#include "waveaug/vicinal.hpp"

namespace waveaug {

// Tool configuration. Layers apply in order: shipped defaults, a JSON config
// file, then command-line flags. The file schema (every key optional):
//
//   {
//     "snr": {"min_db": 8, "max_db": 32},            applies to every scheme
//     "schemes": {
//       "bandlimited" | "notch" | "widepass": {
//         "omega_min_hz": 50, "omega_max_hz": 800, "p": 8,
//         "support_ms": 25, "snr": {"min_db": .., "max_db": ..}
//       },
//       "rir": {
//         "rooms": [[4, 4, 2.5], ...], "materials": ["hard surface", ...],
//         "material_registry": "materials.json",     relative to the config file
//         "d_min_m": 0.03, "d_max_m": 3.0, "max_order": 8,
//         "speed_of_sound": 343, "snr": {...}
//       }
//     },
//     "online": {"p_keep": 0.2}
//   }
//
// Unknown keys are rejected so typos do not silently fall back to defaults.
struct ToolConfig {
  std::map<Scheme, AugmentConfig> schemes;
  std::map<Scheme, double> support_ms;
  double p_keep = kDefaultKeepProbability;

  static ToolConfig defaults() {
    ToolConfig c;
    for (Scheme s : kAllSchemes) c.schemes[s] = AugmentConfig::defaults(s);
    return c;
  }

  // The scheme's config with its support resolved for the given rate.
  AugmentConfig resolve(Scheme s, int sample_rate) const {
    AugmentConfig cfg = schemes.at(s);
    if (auto it = support_ms.find(s); it != support_ms.end()) {
      cfg.support_len = static_cast<std::size_t>(std::lround(it->second * 1e-3 * sample_rate));
    }
    return cfg;
  }

  void set_snr(const SnrRange& snr) {
    snr.validate();
    for (auto& [s, cfg] : schemes) cfg.snr = snr;
  }
};

namespace detail {

inline void check_keys(const nlohmann::json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  require(obj.is_object(), ErrorKind::kFormat, "config: '" + where + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    require(ok.count(key) != 0, ErrorKind::kFormat, "config: unknown key '" + where + "." + key + "'");
  }
}

inline double get_number(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  require(v.is_number(), ErrorKind::kFormat, "config: '" + where + "." + key + "' must be a number");
  return v.get<double>();
}

inline std::size_t get_count(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0), ErrorKind::kFormat,
          "config: '" + where + "." + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

inline void read_snr(const nlohmann::json& obj, const std::string& where, SnrRange& snr) {
  check_keys(obj, where, {"min_db", "max_db"});
  if (obj.contains("min_db")) snr.min_db = get_number(obj, "min_db", where);
  if (obj.contains("max_db")) snr.max_db = get_number(obj, "max_db", where);
  snr.validate();
}

}  // namespace detail

// Overlays a parsed config document onto `base`. `base_dir` resolves relative
// registry paths.
inline ToolConfig apply_config(ToolConfig base, const nlohmann::json& doc,
                               const std::filesystem::path& base_dir = {}) {
  using detail::get_count;
  using detail::get_number;
  detail::check_keys(doc, "<root>", {"snr", "schemes", "online"});
  if (doc.contains("snr")) {
    SnrRange snr;
    detail::read_snr(doc["snr"], "snr", snr);
    base.set_snr(snr);
  }
  if (doc.contains("schemes")) {
    const auto& schemes = doc["schemes"];
    detail::check_keys(schemes, "schemes", {"bandlimited", "notch", "widepass", "rir"});
    for (const auto& [name, body] : schemes.items()) {
      const Scheme s = parse_scheme(name);
      const std::string where = "schemes." + name;
      AugmentConfig& cfg = base.schemes[s];
      if (s == Scheme::kNoisyRir) {
        detail::check_keys(body, where,
                           {"rooms", "materials", "material_registry", "d_min_m", "d_max_m", "max_order",
                            "speed_of_sound", "snr"});
        RirSettings& rir = cfg.rir;
        if (body.contains("material_registry")) {
          const auto& v = body["material_registry"];
          detail::require(v.is_string(), ErrorKind::kFormat, "config: '" + where + ".material_registry' must be a string");
          std::filesystem::path p = v.get<std::string>();
          if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
          rir.registry = MaterialRegistry::load(p.string());
        }
        if (body.contains("rooms")) {
          const auto& rooms = body["rooms"];
          detail::require(rooms.is_array() && !rooms.empty(), ErrorKind::kFormat,
                          "config: '" + where + ".rooms' must be a non-empty array");
          rir.rooms.clear();
          for (const auto& r : rooms) {
            detail::require(r.is_array() && r.size() == 3, ErrorKind::kFormat,
                            "config: each room must be [length, width, height]");
            Point3 dims{};
            for (int i = 0; i < 3; ++i) {
              detail::require(r[i].is_number(), ErrorKind::kFormat, "config: room dimensions must be numbers");
              dims[i] = r[i].get<double>();
            }
            rir.rooms.push_back(dims);
          }
        }
        if (body.contains("materials")) {
          const auto& mats = body["materials"];
          detail::require(mats.is_array() && !mats.empty(), ErrorKind::kFormat,
                          "config: '" + where + ".materials' must be a non-empty array");
          rir.materials.clear();
          for (const auto& m : mats) {
            detail::require(m.is_string(), ErrorKind::kFormat, "config: material names must be strings");
            rir.materials.push_back(m.get<std::string>());
          }
        }
        if (body.contains("d_min_m")) rir.d_min = get_number(body, "d_min_m", where);
        if (body.contains("d_max_m")) rir.d_max = get_number(body, "d_max_m", where);
        if (body.contains("max_order")) rir.max_order = static_cast<int>(get_count(body, "max_order", where));
        if (body.contains("speed_of_sound")) rir.speed_of_sound = get_number(body, "speed_of_sound", where);
      } else {
        detail::check_keys(body, where, {"omega_min_hz", "omega_max_hz", "p", "support_ms", "snr"});
        if (body.contains("omega_min_hz")) cfg.omega_min = get_number(body, "omega_min_hz", where);
        if (body.contains("omega_max_hz")) cfg.omega_max = get_number(body, "omega_max_hz", where);
        if (body.contains("p")) cfg.p = get_count(body, "p", where);
        if (body.contains("support_ms")) {
          const double ms = get_number(body, "support_ms", where);
          detail::require(ms > 0.0, ErrorKind::kParameter, "config: '" + where + ".support_ms' must be positive");
          base.support_ms[s] = ms;
        }
      }
      if (body.contains("snr")) detail::read_snr(body["snr"], where + ".snr", cfg.snr);
    }
  }
  if (doc.contains("online")) {
    detail::check_keys(doc["online"], "online", {"p_keep"});
    if (doc["online"].contains("p_keep")) {
      const double p = detail::get_number(doc["online"], "p_keep", "online");
      detail::require(p >= 0.0 && p <= 1.0, ErrorKind::kParameter, "config: online.p_keep must lie in [0, 1]");
      base.p_keep = p;
    }
  }
  return base;
}

inline ToolConfig load_config(const std::string& path, ToolConfig base = ToolConfig::defaults()) {
  std::ifstream in(path);
  detail::require(static_cast<bool>(in), ErrorKind::kIo, "cannot open config " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    detail::fail(ErrorKind::kFormat, "config " + path + ": " + e.what());
  }
  return apply_config(std::move(base), doc, std::filesystem::path(path).parent_path());
}

}  // namespace waveaug

#endif  // WAVEAUG_CONFIG_HPP_
