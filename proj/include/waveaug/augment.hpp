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

#ifndef WAVEAUG_AUGMENT_HPP_
#define WAVEAUG_AUGMENT_HPP_

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "waveaug/dsp.hpp"
#include "waveaug/error.hpp"
#include "waveaug/filters.hpp"
#include "waveaug/rng.hpp"
#include "waveaug/room.hpp"
#include "waveaug/signal.hpp"

namespace waveaug {

enum class Scheme { kIdentity, kBandLimited, kDoubleNotch, kWidePass, kNoisyRir };

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kIdentity: return "identity";
    case Scheme::kBandLimited: return "bandlimited";
    case Scheme::kDoubleNotch: return "notch";
    case Scheme::kWidePass: return "widepass";
    case Scheme::kNoisyRir: return "rir";
  }
  return "unknown";
}

inline Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::kIdentity, Scheme::kBandLimited, Scheme::kDoubleNotch, Scheme::kWidePass,
                   Scheme::kNoisyRir}) {
    if (to_string(s) == name) return s;
  }
  detail::fail(ErrorKind::kParameter, "unknown scheme '" + std::string(name) + "'");
}

inline constexpr Scheme kAllSchemes[] = {Scheme::kBandLimited, Scheme::kDoubleNotch, Scheme::kWidePass,
                                         Scheme::kNoisyRir};

struct SnrRange {
  double min_db = 8.0;
  double max_db = 32.0;

  void validate() const {
    detail::require(std::isfinite(min_db) && std::isfinite(max_db) && min_db <= max_db, ErrorKind::kParameter,
                    "SNR range needs finite gamma_min <= gamma_max");
  }

  double draw(Rng& rng) const { return min_db == max_db ? min_db : rng.uniform(min_db, max_db); }
};

struct RirSettings {
  std::vector<Point3> rooms = default_rooms();
  std::vector<std::string> materials = default_materials();
  MaterialRegistry registry = MaterialRegistry::defaults();
  double d_min = kDefaultMinDistance;
  double d_max = kDefaultMaxDistance;
  int max_order = 8;
  double speed_of_sound = 343.0;
  // Replaces the material absorption when set (testing, single-material sweeps).
  std::optional<double> absorption_override;
};

struct AugmentConfig {
  Scheme scheme = Scheme::kBandLimited;
  double omega_min = 50.0;  // Hz
  double omega_max = 800.0; // Hz
  std::size_t p = 8;
  // Parzen support in samples; 25 ms at the signal's rate when unset.
  std::optional<std::size_t> support_len;
  SnrRange snr;
  RirSettings rir;

  static AugmentConfig defaults(Scheme scheme) {
    AugmentConfig cfg;
    cfg.scheme = scheme;
    switch (scheme) {
      case Scheme::kBandLimited: cfg.omega_min = 50.0; cfg.omega_max = 800.0; break;
      case Scheme::kDoubleNotch: cfg.omega_min = 5000.0; cfg.omega_max = 8000.0; break;
      case Scheme::kWidePass: cfg.omega_min = 50.0; cfg.omega_max = 7950.0; break;
      case Scheme::kNoisyRir:
      case Scheme::kIdentity: break;
    }
    return cfg;
  }

  std::size_t support_for(int sample_rate) const {
    return support_len.value_or(default_support_len(sample_rate));
  }

  void validate(int sample_rate) const {
    snr.validate();
    switch (scheme) {
      case Scheme::kBandLimited:
      case Scheme::kDoubleNotch:
      case Scheme::kWidePass:
        detail::check_band(omega_min, omega_max, sample_rate, p);
        break;
      case Scheme::kNoisyRir:
        detail::require(!rir.rooms.empty(), ErrorKind::kParameter, "rir: room set is empty");
        detail::require(!rir.materials.empty(), ErrorKind::kParameter, "rir: material set is empty");
        detail::require(rir.d_min > 0.0 && rir.d_min <= rir.d_max, ErrorKind::kParameter,
                        "rir: need 0 < d_min <= d_max");
        for (const auto& m : rir.materials) rir.registry.absorption(m);
        break;
      case Scheme::kIdentity:
        break;
    }
  }
};

// Everything needed to replay one augmentation bit-exactly: the drawn
// parameters, the drawn SNR and the RNG coordinates of the noise draw.
struct AugmentRecord {
  Scheme scheme = Scheme::kIdentity;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t noise_position = 0;
  double gamma_db = 0.0;
  std::size_t choice = 0;  // index of the drawn filter, dip or room

  // Parzen schemes.
  double omega = 0.0;
  double xi = 0.0;
  double gamma_w = 0.0;
  std::size_t support_len = 0;
  // Double notch.
  double dip_hz = 0.0;
  // Noisy RIR.
  Point3 room{};
  std::string material;
  double absorption = 0.0;
  Point3 mic{};
  Point3 source{};
  double distance = 0.0;
  int max_order = 0;
  double speed_of_sound = 0.0;

  std::string to_line() const;
  static AugmentRecord parse(std::string_view line);
};

struct AugmentResult {
  Signal output;
  AugmentRecord record;
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string escape_value(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ' ') out += "%20";
    else if (c == '%') out += "%25";
    else if (c == '=') out += "%3D";
    else out += c;
  }
  return out;
}

inline std::string unescape_value(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      out += static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

inline std::string fmt_point(const Point3& p) {
  return fmt_double(p[0]) + "," + fmt_double(p[1]) + "," + fmt_double(p[2]);
}

inline Point3 parse_point(const std::string& s) {
  Point3 p{};
  std::stringstream ss(s);
  std::string item;
  for (int i = 0; i < 3; ++i) {
    require(static_cast<bool>(std::getline(ss, item, ',')), ErrorKind::kFormat, "bad point '" + s + "'");
    p[i] = std::stod(item);
  }
  return p;
}

}  // namespace detail

inline std::string AugmentRecord::to_line() const {
  using detail::fmt_double;
  std::string line = "scheme=" + std::string(to_string(scheme));
  line += " rng=" + std::string(kRngName) + "/" + std::to_string(kRngVersion);
  line += " seed=" + std::to_string(seed) + " stream=" + std::to_string(stream);
  if (scheme == Scheme::kIdentity) return line;
  line += " noise_pos=" + std::to_string(noise_position);
  line += " snr_db=" + fmt_double(gamma_db) + " choice=" + std::to_string(choice);
  switch (scheme) {
    case Scheme::kBandLimited:
    case Scheme::kWidePass:
      line += " omega_hz=" + fmt_double(omega) + " xi_hz=" + fmt_double(xi) + " gamma_w=" + fmt_double(gamma_w) +
              " support=" + std::to_string(support_len);
      break;
    case Scheme::kDoubleNotch:
      line += " dip_hz=" + fmt_double(dip_hz);
      break;
    case Scheme::kNoisyRir:
      line += " room=" + detail::fmt_point(room) + " material=" + detail::escape_value(material) +
              " alpha=" + fmt_double(absorption) + " mic=" + detail::fmt_point(mic) +
              " source=" + detail::fmt_point(source) + " distance_m=" + fmt_double(distance) +
              " max_order=" + std::to_string(max_order) + " c=" + fmt_double(speed_of_sound);
      break;
    case Scheme::kIdentity:
      break;
  }
  return line;
}

inline AugmentRecord AugmentRecord::parse(std::string_view line) {
  std::map<std::string, std::string> kv;
  std::stringstream ss{std::string(line)};
  std::string token;
  while (ss >> token) {
    const auto eq = token.find('=');
    detail::require(eq != std::string::npos, ErrorKind::kFormat, "record token without '=': " + token);
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  auto get = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    detail::require(it != kv.end(), ErrorKind::kFormat, std::string("record is missing '") + key + "'");
    return it->second;
  };
  AugmentRecord r;
  try {
    r.scheme = parse_scheme(get("scheme"));
    r.seed = std::stoull(get("seed"));
    r.stream = std::stoull(get("stream"));
    if (r.scheme == Scheme::kIdentity) return r;
    r.noise_position = std::stoull(get("noise_pos"));
    r.gamma_db = std::stod(get("snr_db"));
    r.choice = std::stoull(get("choice"));
    switch (r.scheme) {
      case Scheme::kBandLimited:
      case Scheme::kWidePass:
        r.omega = std::stod(get("omega_hz"));
        r.xi = std::stod(get("xi_hz"));
        r.gamma_w = std::stod(get("gamma_w"));
        r.support_len = std::stoull(get("support"));
        break;
      case Scheme::kDoubleNotch:
        r.dip_hz = std::stod(get("dip_hz"));
        break;
      case Scheme::kNoisyRir:
        r.room = detail::parse_point(get("room"));
        r.material = detail::unescape_value(get("material"));
        r.absorption = std::stod(get("alpha"));
        r.mic = detail::parse_point(get("mic"));
        r.source = detail::parse_point(get("source"));
        r.distance = std::stod(get("distance_m"));
        r.max_order = std::stoi(get("max_order"));
        r.speed_of_sound = std::stod(get("c"));
        break;
      case Scheme::kIdentity:
        break;
    }
  } catch (const std::invalid_argument&) {
    detail::fail(ErrorKind::kFormat, "malformed record: " + std::string(line));
  } catch (const std::out_of_range&) {
    detail::fail(ErrorKind::kFormat, "out-of-range value in record: " + std::string(line));
  }
  return r;
}

// Deterministic part of a scheme with frozen draws: the mixture-component
// mean. Linear in x for every scheme.
inline Signal apply_transform(const Signal& x, const AugmentRecord& r);

// Filter that shapes the white noise before scaling (band-limited scheme only).
inline std::optional<FirFilter> noise_shaping_filter(const AugmentRecord& r, int sample_rate) {
  if (r.scheme != Scheme::kBandLimited) return std::nullopt;
  return parzen_filter({r.omega, r.gamma_w, r.support_len}, sample_rate).filter;
}

namespace detail {

inline FirFilter widepass_filter(const AugmentRecord& r, int sample_rate) {
  const FirFilter h = parzen_filter({r.omega, r.gamma_w, r.support_len}, sample_rate).filter;
  // Unit gain at the band center.
  return h.scaled(1.0 / std::abs(frequency_response(h, r.omega, sample_rate)));
}

inline RoomConfig record_room(const AugmentRecord& r) {
  RoomConfig room;
  room.dims = r.room;
  room.material = r.material;
  room.absorption = r.absorption;
  room.max_order = r.max_order;
  room.speed_of_sound = r.speed_of_sound;
  return room;
}

// Steps shared by a fresh draw and a replay: transform, shape and scale the
// noise, mix. The SNR reference is x for the band-limited scheme (x is not
// filtered) and the transformed signal z otherwise.
inline Signal finish(const Signal& x, const AugmentRecord& r) {
  const Signal z = apply_transform(x, r);
  Rng noise_rng(r.seed, r.stream, r.noise_position);
  Signal eps = white_noise(x.size(), x.sample_rate(), noise_rng);
  if (auto shape = noise_shaping_filter(r, x.sample_rate())) {
    eps = convolve_same(eps, *shape);
  }
  eps = snr_scale(eps, z, r.gamma_db);
  return add(z, eps);
}

inline AugmentRecord start_record(Scheme scheme, const Rng& rng) {
  AugmentRecord r;
  r.scheme = scheme;
  r.seed = rng.seed();
  r.stream = rng.stream();
  return r;
}

inline void check_input(const Signal& x, const AugmentConfig& cfg, Scheme expected) {
  require(!x.empty(), ErrorKind::kEmptyInput, std::string(to_string(expected)) + ": empty input signal");
  require(cfg.scheme == expected, ErrorKind::kParameter,
          "config is for scheme '" + std::string(to_string(cfg.scheme)) + "', expected '" +
              std::string(to_string(expected)) + "'");
}

inline AugmentResult draw_noise_and_finish(const Signal& x, const AugmentConfig& cfg, Rng& rng, AugmentRecord r) {
  r.gamma_db = cfg.snr.draw(rng);
  r.noise_position = rng.position();
  // Advance past the noise block so later draws on this stream stay disjoint.
  const Signal out = finish(x, r);
  rng = Rng(rng.seed(), rng.stream(), r.noise_position + 2 * ((x.size() + 1) / 2));
  return {out, r};
}

}  // namespace detail

inline Signal apply_transform(const Signal& x, const AugmentRecord& r) {
  switch (r.scheme) {
    case Scheme::kIdentity:
    case Scheme::kBandLimited:
      return x;
    case Scheme::kDoubleNotch: {
      const Signal zero_notched = convolve_same(x, notch_filter({0.0}, x.sample_rate()));
      return convolve_same(zero_notched, notch_filter({r.dip_hz}, x.sample_rate()));
    }
    case Scheme::kWidePass:
      return convolve_same(x, detail::widepass_filter(r, x.sample_rate()));
    case Scheme::kNoisyRir: {
      const SourceMicGeometry geo{r.mic, r.source, r.distance};
      return convolve_same(x, image_source_rir(detail::record_room(r), geo, x.sample_rate()).as_filter());
    }
  }
  return x;
}

// Distances that cannot be placed in the drawn room are redrawn this many
// times before the geometry error is surfaced.
inline constexpr int kRirGeometryRetries = 8;

// Draws the scheme's discrete and geometric parameters (filter, dip, room,
// material, placement) without the SNR or noise. The result is a frozen
// mixture component: apply_transform(x, record) is its mean.
inline AugmentRecord draw_parameters(const AugmentConfig& cfg, int sample_rate, Rng& rng) {
  cfg.validate(sample_rate);
  AugmentRecord r = detail::start_record(cfg.scheme, rng);
  switch (cfg.scheme) {
    case Scheme::kBandLimited:
    case Scheme::kWidePass: {
      const FilterBankLayout layout =
          cfg.scheme == Scheme::kBandLimited ? evenly_spaced_modes(cfg.omega_min, cfg.omega_max, sample_rate, cfg.p)
                                             : mel_wide_bandwidths(cfg.omega_min, cfg.omega_max, sample_rate, cfg.p);
      r.choice = rng.uniform_index(layout.size());
      r.omega = layout.modes[r.choice];
      r.xi = layout.bandwidths[r.choice];
      r.support_len = cfg.support_for(sample_rate);
      r.gamma_w = bandwidth_to_gamma(r.xi, sample_rate, r.support_len);
      break;
    }
    case Scheme::kDoubleNotch: {
      const FilterBankLayout layout = evenly_spaced_modes(cfg.omega_min, cfg.omega_max, sample_rate, cfg.p);
      r.choice = rng.uniform_index(layout.size());
      r.dip_hz = layout.modes[r.choice];
      break;
    }
    case Scheme::kNoisyRir: {
      r.choice = rng.uniform_index(cfg.rir.rooms.size());
      r.room = cfg.rir.rooms[r.choice];
      r.material = cfg.rir.materials[rng.uniform_index(cfg.rir.materials.size())];
      r.absorption = cfg.rir.absorption_override.value_or(cfg.rir.registry.absorption(r.material));
      r.max_order = cfg.rir.max_order;
      r.speed_of_sound = cfg.rir.speed_of_sound;
      const RoomConfig room = detail::record_room(r);
      for (int attempt = 0;; ++attempt) {
        try {
          const SourceMicGeometry geo = sample_geometry(room, cfg.rir.d_min, cfg.rir.d_max, rng);
          r.mic = geo.mic;
          r.source = geo.source;
          r.distance = geo.distance;
          break;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kGeometry || attempt + 1 >= kRirGeometryRetries) throw;
        }
      }
      break;
    }
    case Scheme::kIdentity:
      break;
  }
  return r;
}

namespace detail {

inline AugmentResult run_scheme(const Signal& x, const AugmentConfig& cfg, Rng& rng, Scheme expected) {
  check_input(x, cfg, expected);
  return draw_noise_and_finish(x, cfg, rng, draw_parameters(cfg, x.sample_rate(), rng));
}

}  // namespace detail

// Band-limited white noise: x + snr_scale(eps0 * h, x) with h a Parzen
// band-pass drawn from p equal bands over [omega_min, omega_max].
inline AugmentResult band_limited_white_noise(const Signal& x, const AugmentConfig& cfg, Rng& rng) {
  return detail::run_scheme(x, cfg, rng, Scheme::kBandLimited);
}

// Noisy double-dip notch: z = (x * h_0) * h_omega plus full-band white noise
// scaled against z.
inline AugmentResult noisy_double_dip_notch(const Signal& x, const AugmentConfig& cfg, Rng& rng) {
  return detail::run_scheme(x, cfg, rng, Scheme::kDoubleNotch);
}

// Noisy wide band-pass: z = x * h with h a Parzen band-pass from a Mel-spaced
// layout, plus full-band white noise scaled against z.
inline AugmentResult noisy_widepass(const Signal& x, const AugmentConfig& cfg, Rng& rng) {
  return detail::run_scheme(x, cfg, rng, Scheme::kWidePass);
}

// Noisy RIR: z = x * h for an image-source RIR in a uniformly drawn room and
// material, aligned on the direct path, plus white noise scaled against z.
inline AugmentResult noisy_rir(const Signal& x, const AugmentConfig& cfg, Rng& rng) {
  return detail::run_scheme(x, cfg, rng, Scheme::kNoisyRir);
}

inline AugmentResult augment(const Signal& x, const AugmentConfig& cfg, Rng& rng) {
  switch (cfg.scheme) {
    case Scheme::kBandLimited: return band_limited_white_noise(x, cfg, rng);
    case Scheme::kDoubleNotch: return noisy_double_dip_notch(x, cfg, rng);
    case Scheme::kWidePass: return noisy_widepass(x, cfg, rng);
    case Scheme::kNoisyRir: return noisy_rir(x, cfg, rng);
    case Scheme::kIdentity: return {x, detail::start_record(Scheme::kIdentity, rng)};
  }
  detail::fail(ErrorKind::kParameter, "unknown scheme");
}

// Recomputes an augmentation from its record; bit-identical to the original.
inline Signal replay(const Signal& x, const AugmentRecord& r) {
  detail::require(!x.empty(), ErrorKind::kEmptyInput, "replay: empty input signal");
  if (r.scheme == Scheme::kIdentity) return x;
  return detail::finish(x, r);
}

}  // namespace waveaug

#endif  // WAVEAUG_AUGMENT_HPP_
