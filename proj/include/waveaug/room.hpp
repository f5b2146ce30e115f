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

#ifndef WAVEAUG_ROOM_HPP_
#define WAVEAUG_ROOM_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "waveaug/error.hpp"
#include "waveaug/rng.hpp"
#include "waveaug/signal.hpp"

namespace waveaug {

using Point3 = std::array<double, 3>;

inline double distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Frequency-independent energy absorption per wall material. Shipped values
// are broadband averages; override them with a registry file:
//   { "materials": { "<name>": <alpha in (0, 1]>, ... } }
class MaterialRegistry {
 public:
  static MaterialRegistry defaults() {
    MaterialRegistry r;
    r.entries_ = {
        {"hard surface", 0.02},  {"marble floor", 0.015}, {"wooden door", 0.10},
        {"glass window", 0.08},  {"hairy carpet", 0.45},
    };
    return r;
  }

  static MaterialRegistry from_json(const nlohmann::json& doc) {
    detail::require(doc.is_object() && doc.contains("materials") && doc["materials"].is_object(),
                    ErrorKind::kFormat, "material registry: expected an object with a 'materials' object");
    MaterialRegistry r;
    for (const auto& [name, value] : doc["materials"].items()) {
      detail::require(value.is_number(), ErrorKind::kFormat,
                      "material registry: absorption for '" + name + "' is not a number");
      r.set(name, value.get<double>());
    }
    detail::require(!r.entries_.empty(), ErrorKind::kFormat, "material registry: no materials");
    return r;
  }

  static MaterialRegistry load(const std::string& path) {
    std::ifstream in(path);
    detail::require(static_cast<bool>(in), ErrorKind::kIo, "cannot open material registry " + path);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      detail::fail(ErrorKind::kFormat, "material registry " + path + ": " + e.what());
    }
    return from_json(doc);
  }

  void set(const std::string& name, double alpha) {
    detail::require(alpha > 0.0 && alpha <= 1.0, ErrorKind::kParameter,
                    "absorption for '" + name + "' must lie in (0, 1], got " + std::to_string(alpha));
    entries_[name] = alpha;
  }

  double absorption(const std::string& name) const {
    const auto it = entries_.find(name);
    if (it == entries_.end()) {
      std::string known;
      for (const auto& [k, v] : entries_) known += (known.empty() ? "" : ", ") + k;
      detail::fail(ErrorKind::kLookup, "unknown material '" + name + "' (known: " + known + ")");
    }
    return it->second;
  }

  bool contains(const std::string& name) const { return entries_.count(name) != 0; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [name, alpha] : entries_) out.push_back(name);
    return out;
  }

 private:
  std::map<std::string, double> entries_;
};

inline double material_absorption(const std::string& name,
                                  const MaterialRegistry& registry = MaterialRegistry::defaults()) {
  return registry.absorption(name);
}

struct RoomConfig {
  Point3 dims{};
  std::string material;
  double absorption = 0.0;
  int max_order = 8;
  double speed_of_sound = 343.0;

  void validate() const {
    for (double d : dims) {
      detail::require(d > 0.0 && std::isfinite(d), ErrorKind::kParameter, "room dimensions must be positive");
    }
    detail::require(absorption > 0.0 && absorption <= 1.0, ErrorKind::kParameter,
                    "absorption must lie in (0, 1], got " + std::to_string(absorption));
    detail::require(max_order >= 0, ErrorKind::kParameter, "max_order must be non-negative");
    detail::require(speed_of_sound > 0.0, ErrorKind::kParameter, "speed of sound must be positive");
  }

  double diagonal() const { return std::sqrt(dims[0] * dims[0] + dims[1] * dims[1] + dims[2] * dims[2]); }

  bool contains(const Point3& p) const {
    for (int i = 0; i < 3; ++i) {
      if (!(p[i] > 0.0 && p[i] < dims[i])) return false;
    }
    return true;
  }
};

inline std::vector<Point3> default_rooms() {
  return {{4.0, 4.0, 2.5}, {10.0, 10.0, 3.5}, {2.5, 1.5, 1.5}};
}

inline std::vector<std::string> default_materials() {
  return {"hard surface", "marble floor", "wooden door", "glass window", "hairy carpet"};
}

inline constexpr double kDefaultMinDistance = 0.03;
inline constexpr double kDefaultMaxDistance = 3.0;

struct SourceMicGeometry {
  Point3 mic{};
  Point3 source{};
  double distance = 0.0;
};

inline constexpr int kGeometryAttempts = 10000;
inline constexpr int kDirectionAttemptsPerMic = 100;

// Microphone uniform in the room, distance uniform in [d_min, d_max], source
// uniform on the sphere of that radius around the microphone, conditioned on
// lying inside the room by rejection.
inline SourceMicGeometry sample_geometry(const RoomConfig& room, double d_min, double d_max, Rng& rng) {
  room.validate();
  detail::require(d_min > 0.0 && d_min <= d_max, ErrorKind::kParameter,
                  "sample_geometry: need 0 < d_min <= d_max");
  detail::require(d_max < room.diagonal(), ErrorKind::kGeometry,
                  "sample_geometry: d_max " + std::to_string(d_max) + " m does not fit a room with diagonal " +
                      std::to_string(room.diagonal()) + " m");
  auto draw_mic = [&] {
    Point3 p{};
    do {
      for (int i = 0; i < 3; ++i) p[i] = rng.uniform(0.0, room.dims[i]);
    } while (!room.contains(p));
    return p;
  };
  const double d = rng.uniform(d_min, d_max);
  Point3 mic = draw_mic();
  for (int attempt = 1; attempt <= kGeometryAttempts; ++attempt) {
    Point3 dir{};
    double norm = 0.0;
    do {
      for (double& v : dir) v = rng.normal();
      norm = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    } while (norm == 0.0);
    const Point3 source{mic[0] + d * dir[0] / norm, mic[1] + d * dir[1] / norm, mic[2] + d * dir[2] / norm};
    if (room.contains(source)) {
      return {mic, source, distance(mic, source)};
    }
    if (attempt % kDirectionAttemptsPerMic == 0) mic = draw_mic();
  }
  detail::fail(ErrorKind::kGeometry, "sample_geometry: no source at " + std::to_string(d) +
                                         " m fits inside the room after " + std::to_string(kGeometryAttempts) +
                                         " attempts");
}

struct Arrival {
  double delay_s = 0.0;
  double amplitude = 0.0;
  int order = 0;  // number of wall reflections
};

struct Rir {
  Signal response;
  std::size_t direct_index = 0;  // first nonzero sample (direct path)
  std::vector<Arrival> arrivals; // sorted by delay
  bool truncated = false;

  // Same-length alignment keeps the direct path at time zero.
  FirFilter as_filter() const {
    return FirFilter(std::vector<double>(response.samples().begin(), response.samples().end()), direct_index);
  }
};

// Residual energy below this fraction of the direct-path energy is dropped.
inline constexpr double kRirTailFloor = 1e-6;  // -60 dB

// Shoebox image-source method (Allen & Berkley). Image (m_x, m_y, m_z) with
// m = 2n - q reflects |m| times per axis; amplitude (1 - alpha)^(r/2) / (4 pi
// dist); fractional delays are split linearly over the two nearest samples.
inline Rir image_source_rir(const RoomConfig& room, const SourceMicGeometry& geo, int sample_rate) {
  room.validate();
  detail::require(sample_rate > 0, ErrorKind::kParameter, "image_source_rir: sample rate must be positive");
  detail::require(room.contains(geo.mic) && room.contains(geo.source), ErrorKind::kGeometry,
                  "image_source_rir: microphone and source must lie strictly inside the room");
  const double beta = std::sqrt(1.0 - room.absorption);
  const int order = room.max_order;

  std::vector<Arrival> arrivals;
  for (int mx = -order; mx <= order; ++mx) {
    for (int my = -(order - std::abs(mx)); my <= order - std::abs(mx); ++my) {
      const int rest = order - std::abs(mx) - std::abs(my);
      for (int mz = -rest; mz <= rest; ++mz) {
        const std::array<int, 3> m{mx, my, mz};
        Point3 image{};
        for (int a = 0; a < 3; ++a) {
          // m even: translated copy; m odd: mirrored copy.
          const int q = m[a] & 1;
          const int n = (m[a] + q) / 2;
          image[a] = 2.0 * n * room.dims[a] + (q ? -geo.source[a] : geo.source[a]);
        }
        const int r = std::abs(mx) + std::abs(my) + std::abs(mz);
        const double gain = r == 0 ? 1.0 : std::pow(beta, r);
        if (gain == 0.0) continue;
        const double dist = distance(image, geo.mic);
        arrivals.push_back({dist / room.speed_of_sound, gain / (4.0 * std::numbers::pi * dist), r});
      }
    }
  }
  std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) {
    return a.delay_s < b.delay_s || (a.delay_s == b.delay_s && a.order < b.order);
  });

  const double last = arrivals.back().delay_s * sample_rate;
  std::vector<double> h(static_cast<std::size_t>(std::floor(last)) + 2, 0.0);
  for (const Arrival& a : arrivals) {
    double tau = a.delay_s * sample_rate;
    // Delays within rounding of a sample boundary land on that sample.
    if (std::abs(tau - std::round(tau)) < 1e-9) tau = std::round(tau);
    const auto i0 = static_cast<std::size_t>(std::floor(tau));
    const double frac = tau - std::floor(tau);
    h[i0] += a.amplitude * (1.0 - frac);
    if (frac > 0.0) h[i0 + 1] += a.amplitude * frac;
  }

  std::size_t direct = 0;
  while (direct < h.size() && h[direct] == 0.0) ++direct;

  // Drop the tail once the remaining energy is below the floor.
  const double direct_amp = 1.0 / (4.0 * std::numbers::pi * geo.distance);
  const double floor_energy = kRirTailFloor * direct_amp * direct_amp;
  std::size_t keep = h.size();
  double tail = 0.0;
  while (keep > direct + 2 && tail + h[keep - 1] * h[keep - 1] < floor_energy) {
    tail += h[keep - 1] * h[keep - 1];
    --keep;
  }
  const bool truncated = keep < h.size() && tail > 0.0;
  h.resize(keep);
  while (!arrivals.empty() && arrivals.back().delay_s * sample_rate >= static_cast<double>(keep)) {
    arrivals.pop_back();
  }
  return Rir{Signal(std::move(h), sample_rate), direct, std::move(arrivals), truncated};
}

// Backward-integrated energy: curve[n] = sum_{k >= n} h[k]^2.
inline std::vector<double> schroeder_curve(const Signal& h) {
  std::vector<double> curve(h.size() + 1, 0.0);
  for (std::size_t k = h.size(); k-- > 0;) curve[k] = curve[k + 1] + h[k] * h[k];
  curve.pop_back();
  return curve;
}

}  // namespace waveaug

#endif  // WAVEAUG_ROOM_HPP_
