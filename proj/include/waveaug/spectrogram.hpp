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

#ifndef WAVEAUG_SPECTROGRAM_HPP_
#define WAVEAUG_SPECTROGRAM_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "waveaug/error.hpp"
#include "waveaug/fft.hpp"
#include "waveaug/signal.hpp"

namespace waveaug {

struct SpectrogramSpec {
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  double floor = 1e-10;  // magnitude clamp before the log

  std::size_t frame_len(int fs) const { return static_cast<std::size_t>(std::lround(frame_ms * 1e-3 * fs)); }
  std::size_t hop_len(int fs) const { return static_cast<std::size_t>(std::lround(hop_ms * 1e-3 * fs)); }
  std::size_t fft_size(int fs) const { return next_pow2(frame_len(fs)); }

  void validate(int fs) const {
    detail::require(frame_len(fs) >= 2, ErrorKind::kParameter, "spectrogram: frame shorter than 2 samples");
    detail::require(hop_len(fs) >= 1 && hop_len(fs) <= frame_len(fs), ErrorKind::kParameter,
                    "spectrogram: need 1 <= hop <= frame length");
    detail::require(floor > 0.0, ErrorKind::kParameter, "spectrogram: log floor must be positive");
  }
};

// Row-major frames x bins, values in dB.
struct Spectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;
  int sample_rate = 0;
  std::size_t fft_size = 0;
  double hop_s = 0.0;
  std::vector<double> db;

  double at(std::size_t frame, std::size_t bin) const { return db[frame * bins + bin]; }
  double bin_hz(std::size_t bin) const {
    return static_cast<double>(bin) * sample_rate / static_cast<double>(fft_size);
  }
};

// Symmetric Hann.
inline std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return w;
}

inline Spectrogram spectrogram(const Signal& x, const SpectrogramSpec& spec = {}) {
  const int fs = x.sample_rate();
  spec.validate(fs);
  const std::size_t frame = spec.frame_len(fs);
  const std::size_t hop = spec.hop_len(fs);
  detail::require(x.size() >= frame, ErrorKind::kParameter,
                  "spectrogram: signal of " + std::to_string(x.size()) + " samples is shorter than one " +
                      std::to_string(frame) + "-sample frame");
  const std::size_t nfft = spec.fft_size(fs);
  const FftPlan plan(nfft);
  const std::vector<double> w = hann_window(frame);

  Spectrogram s;
  s.frames = 1 + (x.size() - frame) / hop;
  s.bins = nfft / 2 + 1;
  s.sample_rate = fs;
  s.fft_size = nfft;
  s.hop_s = static_cast<double>(hop) / fs;
  s.db.resize(s.frames * s.bins);
  std::vector<Complex> buf(nfft);
  for (std::size_t f = 0; f < s.frames; ++f) {
    std::fill(buf.begin(), buf.end(), Complex{});
    for (std::size_t i = 0; i < frame; ++i) buf[i] = x[f * hop + i] * w[i];
    plan.forward(buf);
    for (std::size_t k = 0; k < s.bins; ++k) {
      s.db[f * s.bins + k] = 20.0 * std::log10(std::max(std::abs(buf[k]), spec.floor));
    }
  }
  return s;
}

// Binary P5: time runs left to right, low frequencies at the bottom. Gray
// levels span the matrix range; a constant matrix maps to mid-gray.
inline void write_pgm(std::ostream& out, const Spectrogram& s) {
  const auto [lo_it, hi_it] = std::minmax_element(s.db.begin(), s.db.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  out << "P5\n" << s.frames << ' ' << s.bins << "\n255\n";
  std::vector<unsigned char> row(s.frames);
  for (std::size_t r = 0; r < s.bins; ++r) {
    const std::size_t bin = s.bins - 1 - r;
    for (std::size_t f = 0; f < s.frames; ++f) {
      const double v = range > 0.0 ? (s.at(f, bin) - lo) / range * 255.0 : 127.0;
      row[f] = static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

// One row per frame: time_s followed by one column per bin, named by Hz.
inline void write_csv(std::ostream& out, const Spectrogram& s) {
  char buf[32];
  out << "time_s";
  for (std::size_t k = 0; k < s.bins; ++k) {
    std::snprintf(buf, sizeof buf, ",%.6g", s.bin_hz(k));
    out << buf;
  }
  out << '\n';
  for (std::size_t f = 0; f < s.frames; ++f) {
    std::snprintf(buf, sizeof buf, "%.6g", static_cast<double>(f) * s.hop_s);
    out << buf;
    for (std::size_t k = 0; k < s.bins; ++k) {
      std::snprintf(buf, sizeof buf, ",%.6f", s.at(f, k));
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace waveaug

#endif  // WAVEAUG_SPECTROGRAM_HPP_
