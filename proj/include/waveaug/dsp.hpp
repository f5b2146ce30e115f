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

#ifndef WAVEAUG_DSP_HPP_
#define WAVEAUG_DSP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "waveaug/error.hpp"
#include "waveaug/fft.hpp"
#include "waveaug/rng.hpp"
#include "waveaug/signal.hpp"

namespace waveaug {

// Tap count above which convolve_same switches to FFT overlap-add.
inline constexpr std::size_t kFftTapThreshold = 64;

enum class ConvolutionMethod { kAuto, kDirect, kFft };

inline Signal white_noise(std::size_t n, int sample_rate, Rng& rng) {
  detail::require(n >= 1, ErrorKind::kEmptyInput, "white_noise: sample count must be >= 1");
  std::vector<double> out(n);
  rng.fill_normal(out);
  return Signal(std::move(out), sample_rate);
}

inline double mean_power(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

inline double mean_power(const Signal& x) { return mean_power(x.samples()); }

namespace detail {

inline void convolve_same_direct(std::span<const double> x, const FirFilter& h,
                                 std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto c = static_cast<std::ptrdiff_t>(h.center());
  const auto taps = h.taps();
  const auto len = static_cast<std::ptrdiff_t>(taps.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    // x index j = i + c - k must lie in [0, n).
    const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(0, i + c - n + 1);
    const std::ptrdiff_t k_hi = std::min<std::ptrdiff_t>(len - 1, i + c);
    double acc = 0.0;
    for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k) {
      acc += taps[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(i + c - k)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
}

// Overlap-add over the full linear convolution, keeping indices
// [center, center + n). Two real blocks share one complex transform.
inline void convolve_same_fft(std::span<const double> x, const FirFilter& h,
                              std::span<double> out) {
  const std::size_t n = x.size();
  const std::size_t len = h.size();
  const std::size_t c = h.center();
  const std::size_t full = n + len - 1;
  std::size_t nfft = std::max<std::size_t>(next_pow2(2 * len), 256);
  if (next_pow2(full) < nfft) nfft = next_pow2(full);
  const std::size_t block = nfft - len + 1;

  FftPlan plan(nfft);
  std::vector<Complex> kernel(nfft);
  for (std::size_t k = 0; k < len; ++k) kernel[k] = h[k];
  plan.forward(kernel);

  std::fill(out.begin(), out.end(), 0.0);
  auto accumulate = [&](std::size_t start, std::size_t idx, double value) {
    const std::size_t m = start + idx;  // index in the full convolution
    if (m >= c && m < c + n) out[m - c] += value;
  };

  std::vector<Complex> buf(nfft);
  for (std::size_t start = 0; start < n; start += 2 * block) {
    const std::size_t second = start + block;
    std::fill(buf.begin(), buf.end(), Complex{});
    for (std::size_t i = 0; i < block && start + i < n; ++i) buf[i].real(x[start + i]);
    for (std::size_t i = 0; i < block && second + i < n; ++i) buf[i].imag(x[second + i]);
    plan.forward(buf);
    for (std::size_t k = 0; k < nfft; ++k) buf[k] *= kernel[k];
    plan.inverse(buf);
    const std::size_t span_len = std::min(nfft, full - start);
    for (std::size_t i = 0; i < span_len; ++i) accumulate(start, i, buf[i].real());
    if (second < n) {
      const std::size_t span2 = std::min(nfft, full - second);
      for (std::size_t i = 0; i < span2; ++i) accumulate(second, i, buf[i].imag());
    }
  }
}

}  // namespace detail

// Same-length linear convolution aligned on the filter's center tap:
//   out[i] = sum_k taps[k] * x[i + center - k], with x zero outside [0, n).
inline Signal convolve_same(const Signal& x, const FirFilter& h,
                            ConvolutionMethod method = ConvolutionMethod::kAuto) {
  detail::require(!x.empty(), ErrorKind::kEmptyInput, "convolve_same: empty signal");
  std::vector<double> out(x.size());
  if (method == ConvolutionMethod::kAuto) {
    method = h.size() > kFftTapThreshold ? ConvolutionMethod::kFft : ConvolutionMethod::kDirect;
  }
  if (method == ConvolutionMethod::kFft) {
    detail::convolve_same_fft(x.samples(), h, out);
  } else {
    detail::convolve_same_direct(x.samples(), h, out);
  }
  return Signal(std::move(out), x.sample_rate());
}

// Multiplication by the circulant matrix generated by h:
//   out[i] = sum_k taps[k] * x[(i + center - k) mod n].
inline Signal circular_convolve(const Signal& x, const FirFilter& h) {
  const std::size_t n = x.size();
  detail::require(h.size() <= n, ErrorKind::kShape,
                  "circular_convolve: " + std::to_string(h.size()) + " taps exceed signal length " +
                      std::to_string(n));
  std::vector<double> out(n, 0.0);
  const auto taps = h.taps();
  const std::size_t c = h.center();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k) {
      // (i + c - k) mod n without signed overflow; c, k < n.
      const std::size_t j = (i + c + n - k) % n;
      acc += taps[k] * x[j];
    }
    out[i] = acc;
  }
  return Signal(std::move(out), x.sample_rate());
}

namespace detail {

inline void require_pair(const Signal& a, const Signal& b, const char* op) {
  require(a.size() == b.size(), ErrorKind::kShape,
          std::string(op) + ": length mismatch " + std::to_string(a.size()) + " vs " +
              std::to_string(b.size()));
  require(a.sample_rate() == b.sample_rate(), ErrorKind::kShape,
          std::string(op) + ": sample rate mismatch " + std::to_string(a.sample_rate()) + " vs " +
              std::to_string(b.sample_rate()));
}

}  // namespace detail

// Amplitude factor s with P_ref / (s^2 P_noise) = 10^(gamma_db / 10).
inline double snr_scale_factor(const Signal& noise, const Signal& reference, double gamma_db) {
  detail::require_pair(noise, reference, "snr_scale");
  const double p_ref = mean_power(reference);
  const double p_noise = mean_power(noise);
  detail::require(p_ref > 0.0, ErrorKind::kDegenerate, "snr_scale: reference has zero power");
  detail::require(p_noise > 0.0, ErrorKind::kDegenerate, "snr_scale: noise has zero power");
  return std::sqrt(p_ref / (p_noise * std::pow(10.0, gamma_db / 10.0)));
}

inline Signal scale(const Signal& x, double gain) {
  std::vector<double> out(x.samples().begin(), x.samples().end());
  for (double& v : out) v *= gain;
  return Signal(std::move(out), x.sample_rate());
}

inline Signal snr_scale(const Signal& noise, const Signal& reference, double gamma_db) {
  return scale(noise, snr_scale_factor(noise, reference, gamma_db));
}

inline double measure_snr(const Signal& clean, const Signal& noise) {
  detail::require_pair(clean, noise, "measure_snr");
  const double p_clean = mean_power(clean);
  const double p_noise = mean_power(noise);
  detail::require(p_clean > 0.0, ErrorKind::kDegenerate, "measure_snr: clean signal has zero power");
  detail::require(p_noise > 0.0, ErrorKind::kDegenerate, "measure_snr: noise has zero power");
  return 10.0 * std::log10(p_clean / p_noise);
}

inline Signal add(const Signal& a, const Signal& b) {
  detail::require_pair(a, b, "add");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return Signal(std::move(out), a.sample_rate());
}

inline Signal subtract(const Signal& a, const Signal& b) {
  detail::require_pair(a, b, "subtract");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return Signal(std::move(out), a.sample_rate());
}

}  // namespace waveaug

#endif  // WAVEAUG_DSP_HPP_
