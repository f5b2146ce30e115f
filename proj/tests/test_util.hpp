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

#ifndef WAVEAUG_TESTS_TEST_UTIL_HPP_
#define WAVEAUG_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "waveaug/signal.hpp"

namespace waveaug::test {

// Test inputs come from std::mt19937_64 so the oracles never share a
// generator with the code under test.
inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

inline Signal random_signal(std::size_t n, std::uint64_t seed, int fs = 16000, double scale = 1.0) {
  return Signal(random_vector(n, seed, scale), fs);
}

inline Signal tone(double freq, int fs, std::size_t n, double amp = 0.5, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amp * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / fs + phase);
  }
  return Signal(std::move(x), fs);
}

// Direct O(n^2) DFT power |X_k|^2 for k = 0..n/2; independent of the library FFT.
inline std::vector<double> dft_power(const std::vector<double>& x, std::size_t n) {
  std::vector<double> p(n / 2 + 1);
  for (std::size_t k = 0; k < p.size(); ++k) {
    std::complex<double> acc{};
    for (std::size_t i = 0; i < std::min(n, x.size()); ++i) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(k * i % n) / static_cast<double>(n);
      acc += x[i] * std::complex<double>(std::cos(a), std::sin(a));
    }
    p[k] = std::norm(acc);
  }
  return p;
}

// |H(f)| of taps centered anywhere; magnitude does not depend on the center.
inline double tap_gain(const std::vector<double>& taps, double freq, int fs) {
  std::complex<double> acc{};
  for (std::size_t k = 0; k < taps.size(); ++k) {
    const double a = -2.0 * std::numbers::pi * freq * static_cast<double>(k) / fs;
    acc += taps[k] * std::complex<double>(std::cos(a), std::sin(a));
  }
  return std::abs(acc);
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("waveaug_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace waveaug::test

#endif  // WAVEAUG_TESTS_TEST_UTIL_HPP_
