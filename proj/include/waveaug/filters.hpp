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

#ifndef WAVEAUG_FILTERS_HPP_
#define WAVEAUG_FILTERS_HPP_

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "waveaug/error.hpp"
#include "waveaug/fft.hpp"
#include "waveaug/signal.hpp"

namespace waveaug {

// Number of samples in 25 ms, the maximum Parzen filter length.
inline std::size_t default_support_len(int sample_rate) {
  return static_cast<std::size_t>(std::lround(0.025 * sample_rate));
}

// Squared Epanechnikov window k(t) = (1 - gamma t^2)^2 on |t| <= 1/sqrt(gamma).
// gamma_w is in 1/s^2 and must be positive.
inline double epanechnikov_window(double gamma_w, double t) {
  const double u = gamma_w * t * t;
  if (u > 1.0) return 0.0;
  const double base = 1.0 - u;
  return base * base;
}

struct ParzenFilterSpec {
  double eta = 0.0;            // modulation frequency, Hz
  double gamma_w = 0.0;        // window width parameter, 1/s^2
  std::size_t support_len = 0; // maximum tap count
};

struct ParzenDesign {
  FirFilter filter;
  // The natural window support did not fit into support_len and was cut.
  bool truncated = false;
  // Half-length in samples of the untruncated window.
  std::size_t natural_half_len = 0;
};

namespace detail {

inline std::size_t natural_half_len(double gamma_w, int sample_rate) {
  // Largest n with gamma * (n / fs)^2 <= 1.
  auto m = static_cast<std::size_t>(std::floor(sample_rate / std::sqrt(gamma_w)));
  while (m > 0 && gamma_w * std::pow(static_cast<double>(m) / sample_rate, 2) > 1.0) --m;
  return m;
}

}  // namespace detail

// phi(t) = cos(2 pi eta t) k(t) sampled at t = n / fs, zero-padded
// symmetrically to the largest odd length <= support_len.
inline ParzenDesign parzen_filter(const ParzenFilterSpec& spec, int sample_rate) {
  detail::require(sample_rate > 0, ErrorKind::kParameter, "parzen_filter: sample rate must be positive");
  detail::require(spec.gamma_w > 0.0 && std::isfinite(spec.gamma_w), ErrorKind::kParameter,
                  "parzen_filter: gamma_w must be positive");
  detail::require(spec.eta >= 0.0 && spec.eta < sample_rate / 2.0, ErrorKind::kParameter,
                  "parzen_filter: eta " + std::to_string(spec.eta) + " Hz outside [0, Nyquist)");
  detail::require(spec.support_len >= 1, ErrorKind::kParameter, "parzen_filter: support_len must be >= 1");

  const std::size_t max_half = (spec.support_len - 1) / 2;
  const std::size_t natural = detail::natural_half_len(spec.gamma_w, sample_rate);
  const std::size_t half = std::min(natural, max_half);
  std::vector<double> taps(2 * max_half + 1, 0.0);
  for (std::size_t n = 0; n <= half; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    const double v = std::cos(2.0 * std::numbers::pi * spec.eta * t) * epanechnikov_window(spec.gamma_w, t);
    taps[max_half + n] = v;
    taps[max_half - n] = v;
  }
  return ParzenDesign{FirFilter(std::move(taps), max_half), natural > max_half, natural};
}

// H(f) = sum_k taps[k] exp(-j 2 pi f (k - center) / fs).
inline Complex frequency_response(const FirFilter& h, double freq, int sample_rate) {
  detail::require(freq >= 0.0 && freq <= sample_rate / 2.0, ErrorKind::kParameter,
                  "frequency_response: " + std::to_string(freq) + " Hz outside [0, Nyquist]");
  Complex acc{};
  const auto taps = h.taps();
  const double w = 2.0 * std::numbers::pi * freq / sample_rate;
  for (std::size_t k = 0; k < taps.size(); ++k) {
    const double phase = -w * (static_cast<double>(k) - static_cast<double>(h.center()));
    acc += taps[k] * Complex(std::cos(phase), std::sin(phase));
  }
  return acc;
}

namespace detail {

// Zero-phase response of a symmetric window: w0 + 2 sum_n w_n cos(2 pi f n / fs).
inline double symmetric_response(const std::vector<double>& half_taps, double freq, int fs) {
  double acc = half_taps[0];
  const double w = 2.0 * std::numbers::pi * freq / fs;
  for (std::size_t n = 1; n < half_taps.size(); ++n) acc += 2.0 * half_taps[n] * std::cos(w * n);
  return acc;
}

}  // namespace detail

// Two-sided -3 dB main-lobe width (Hz) of the sampled window for gamma_w,
// cut to support_len taps. Infinity when the response never drops 3 dB
// below DC before Nyquist.
inline double window_bandwidth(double gamma_w, int sample_rate, std::size_t support_len) {
  const std::size_t max_half = (support_len - 1) / 2;
  const std::size_t half = std::min(detail::natural_half_len(gamma_w, sample_rate), max_half);
  std::vector<double> half_taps(half + 1);
  for (std::size_t n = 0; n <= half; ++n) {
    half_taps[n] = epanechnikov_window(gamma_w, static_cast<double>(n) / sample_rate);
  }
  const double nyquist = sample_rate / 2.0;
  const double target = half_taps.size() > 0 ? detail::symmetric_response(half_taps, 0.0, sample_rate) / std::numbers::sqrt2 : 0.0;
  const double step = nyquist / (4.0 * static_cast<double>(half + 1));
  double lo = 0.0;
  double hi = -1.0;
  for (double f = step; f <= nyquist; f += step) {
    if (detail::symmetric_response(half_taps, f, sample_rate) <= target) {
      hi = f;
      break;
    }
    lo = f;
  }
  if (hi < 0.0) {
    if (detail::symmetric_response(half_taps, nyquist, sample_rate) > target) {
      return std::numeric_limits<double>::infinity();
    }
    hi = nyquist;
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (detail::symmetric_response(half_taps, mid, sample_rate) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + hi;  // 2 * midpoint
}

namespace detail {

inline double calibrate_gamma(double xi, int sample_rate, std::size_t support_len) {
  require(xi > 0.0 && std::isfinite(xi), ErrorKind::kParameter, "bandwidth_to_gamma: bandwidth must be positive");
  require(support_len >= 3, ErrorKind::kParameter, "bandwidth_to_gamma: support_len must be >= 3");
  const double max_half = static_cast<double>((support_len - 1) / 2);
  double gamma_lo = std::pow(sample_rate / max_half, 2);
  const double narrowest = window_bandwidth(gamma_lo, sample_rate, support_len);
  if (xi < narrowest) {
    fail(ErrorKind::kCalibration, "bandwidth_to_gamma: " + std::to_string(xi) + " Hz is narrower than the " +
                                      std::to_string(narrowest) + " Hz achievable with " +
                                      std::to_string(support_len) + " taps");
  }
  double gamma_hi = gamma_lo;
  while (window_bandwidth(gamma_hi, sample_rate, support_len) < xi) {
    gamma_lo = gamma_hi;
    gamma_hi *= 2.0;
    if (gamma_hi > 4.0 * std::pow(static_cast<double>(sample_rate), 2)) {
      fail(ErrorKind::kCalibration,
           "bandwidth_to_gamma: " + std::to_string(xi) + " Hz is wider than any realizable window");
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(gamma_lo * gamma_hi);
    if (window_bandwidth(mid, sample_rate, support_len) < xi) {
      gamma_lo = mid;
    } else {
      gamma_hi = mid;
    }
    if (gamma_hi / gamma_lo - 1.0 < 1e-12) break;
  }
  return std::sqrt(gamma_lo * gamma_hi);
}

}  // namespace detail

// gamma_w whose windowed filter has a -3 dB two-sided bandwidth of xi Hz.
// Bisection on log(gamma); width grows monotonically with gamma.
inline double bandwidth_to_gamma(double xi, int sample_rate, std::size_t support_len) {
  using Key = std::tuple<double, int, std::size_t>;
  static std::mutex mu;
  static std::map<Key, double> memo;
  const Key key{xi, sample_rate, support_len};
  {
    std::lock_guard lock(mu);
    if (const auto it = memo.find(key); it != memo.end()) return it->second;
  }
  const double gamma = detail::calibrate_gamma(xi, sample_rate, support_len);
  std::lock_guard lock(mu);
  memo.emplace(key, gamma);
  return gamma;
}

// Band-pass Parzen filter centered at eta Hz with -3 dB width xi Hz.
inline ParzenDesign parzen_bandpass(double eta, double xi, int sample_rate, std::size_t support_len) {
  const double gamma_w = bandwidth_to_gamma(xi, sample_rate, support_len);
  return parzen_filter({eta, gamma_w, support_len}, sample_rate);
}

struct FilterBankLayout {
  std::vector<double> modes;       // center frequencies, Hz
  std::vector<double> bandwidths;  // Hz

  std::size_t size() const noexcept { return modes.size(); }
};

namespace detail {

inline void check_band(double omega_min, double omega_max, int sample_rate, std::size_t p) {
  require(sample_rate > 0, ErrorKind::kParameter, "sample rate must be positive");
  require(p >= 1, ErrorKind::kParameter, "filter count p must be >= 1");
  require(omega_min > 0.0, ErrorKind::kParameter,
          "omega_min must be positive, got " + std::to_string(omega_min));
  require(omega_min < omega_max, ErrorKind::kParameter,
          "omega_min " + std::to_string(omega_min) + " must be below omega_max " + std::to_string(omega_max));
  require(omega_max <= sample_rate / 2.0, ErrorKind::kParameter,
          "omega_max " + std::to_string(omega_max) + " Hz exceeds Nyquist " +
              std::to_string(sample_rate / 2.0) + " Hz at " + std::to_string(sample_rate) + " Hz");
}

}  // namespace detail

// p equal bands tiling [omega_min, omega_max]; modes at the band centers.
inline FilterBankLayout evenly_spaced_modes(double omega_min, double omega_max, int sample_rate, std::size_t p) {
  detail::check_band(omega_min, omega_max, sample_rate, p);
  const double delta = (omega_max - omega_min) / static_cast<double>(p);
  FilterBankLayout layout;
  for (std::size_t i = 0; i < p; ++i) {
    layout.modes.push_back(omega_min + (static_cast<double>(i) + 0.5) * delta);
    layout.bandwidths.push_back(delta);
  }
  return layout;
}

inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// p bands of equal Mel width tiling [omega_min, omega_max].
inline FilterBankLayout mel_wide_bandwidths(double omega_min, double omega_max, int sample_rate, std::size_t p) {
  detail::check_band(omega_min, omega_max, sample_rate, p);
  const double m_lo = hz_to_mel(omega_min);
  const double m_hi = hz_to_mel(omega_max);
  const double dm = (m_hi - m_lo) / static_cast<double>(p);
  FilterBankLayout layout;
  for (std::size_t i = 0; i < p; ++i) {
    const double mc = m_lo + (static_cast<double>(i) + 0.5) * dm;
    // Outer edges are pinned so the bands tile the range exactly.
    const double lower = i == 0 ? omega_min : mel_to_hz(mc - dm / 2.0);
    const double upper = i + 1 == p ? omega_max : mel_to_hz(mc + dm / 2.0);
    layout.modes.push_back(mel_to_hz(mc));
    layout.bandwidths.push_back(upper - lower);
  }
  return layout;
}

struct NotchSpec {
  double dip_freq = 0.0;  // Hz
};

// Three-tap notch [1, -2 cos(2 pi dip / fs), 1] with an exact spectral zero
// at dip_freq. Not gain-normalized.
inline FirFilter notch_filter(const NotchSpec& spec, int sample_rate) {
  detail::require(sample_rate > 0, ErrorKind::kParameter, "notch_filter: sample rate must be positive");
  detail::require(spec.dip_freq >= 0.0 && spec.dip_freq <= sample_rate / 2.0, ErrorKind::kParameter,
                  "notch_filter: dip " + std::to_string(spec.dip_freq) + " Hz outside [0, Nyquist]");
  const double omega = 2.0 * std::numbers::pi * spec.dip_freq / sample_rate;
  return FirFilter({1.0, -2.0 * std::cos(omega), 1.0}, 1);
}

// One coefficient per line, 17 significant digits (round-trips exactly).
inline void write_taps(std::ostream& os, const FirFilter& h) {
  char buf[32];
  for (double t : h.taps()) {
    std::snprintf(buf, sizeof(buf), "%.17g", t);
    os << buf << '\n';
  }
}

inline std::vector<double> read_taps(std::istream& is) {
  std::vector<double> taps;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      detail::fail(ErrorKind::kFormat, "tap list: cannot parse '" + line + "'");
    }
    taps.push_back(v);
  }
  return taps;
}

}  // namespace waveaug

#endif  // WAVEAUG_FILTERS_HPP_
