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

#ifndef WAVEAUG_FFT_HPP_
#define WAVEAUG_FFT_HPP_

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "waveaug/error.hpp"

namespace waveaug {

using Complex = std::complex<double>;

constexpr std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Iterative radix-2 transform with precomputed twiddles and bit reversal.
// Plain portable arithmetic keeps results identical across platforms.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n), twiddle_(n / 2), reversed_(n) {
    detail::require(n >= 1 && (n & (n - 1)) == 0, ErrorKind::kParameter,
                    "FFT size must be a power of two");
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      twiddle_[k] = Complex(std::cos(angle), std::sin(angle));
    }
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b) {
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      }
      reversed_[i] = r;
    }
  }

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<Complex> data) const { transform(data, false); }

  // Includes the 1/n normalization.
  void inverse(std::span<Complex> data) const {
    transform(data, true);
    const double scale = 1.0 / static_cast<double>(n_);
    for (Complex& v : data) v *= scale;
  }

 private:
  void transform(std::span<Complex> a, bool inverse) const {
    detail::require(a.size() == n_, ErrorKind::kShape, "FFT buffer size mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
      if (i < reversed_[i]) std::swap(a[i], a[reversed_[i]]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          Complex w = twiddle_[j * stride];
          if (inverse) w = std::conj(w);
          const Complex u = a[start + j];
          const Complex v = a[start + j + half] * w;
          a[start + j] = u + v;
          a[start + j + half] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<Complex> twiddle_;
  std::vector<std::size_t> reversed_;
};

// Magnitudes of bins 0..nfft/2 of the zero-padded real input.
inline std::vector<double> magnitude_spectrum(std::span<const double> x, std::size_t nfft) {
  detail::require(x.size() <= nfft, ErrorKind::kShape, "input longer than FFT size");
  FftPlan plan(nfft);
  std::vector<Complex> buf(nfft);
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i];
  plan.forward(buf);
  std::vector<double> mag(nfft / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(buf[k]);
  return mag;
}

}  // namespace waveaug

#endif  // WAVEAUG_FFT_HPP_
