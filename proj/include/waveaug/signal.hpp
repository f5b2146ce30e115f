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

#ifndef WAVEAUG_SIGNAL_HPP_
#define WAVEAUG_SIGNAL_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "waveaug/error.hpp"

namespace waveaug {

// Mono waveform. Samples are dimensionless amplitudes, finite by construction.
class Signal {
 public:
  Signal(std::vector<double> samples, int sample_rate)
      : samples_(std::move(samples)), sample_rate_(sample_rate) {
    detail::require(sample_rate_ > 0, ErrorKind::kParameter,
                    "sample rate must be positive, got " + std::to_string(sample_rate_));
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      detail::require(std::isfinite(samples_[i]), ErrorKind::kParameter,
                      "non-finite sample at index " + std::to_string(i));
    }
  }

  static Signal zeros(std::size_t n, int sample_rate) {
    return Signal(std::vector<double>(n, 0.0), sample_rate);
  }

  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  int sample_rate() const noexcept { return sample_rate_; }
  double duration() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }

  // Moves the sample buffer out, leaving the signal empty.
  std::vector<double> release() && { return std::move(samples_); }

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

// Finite impulse response with an explicit time-zero tap. Parzen, notch and
// room impulse responses are all represented this way.
class FirFilter {
 public:
  FirFilter(std::vector<double> taps, std::size_t center)
      : taps_(std::move(taps)), center_(center) {
    detail::require(!taps_.empty(), ErrorKind::kParameter, "filter needs at least one tap");
    detail::require(center_ < taps_.size(), ErrorKind::kParameter,
                    "filter center " + std::to_string(center_) + " outside " +
                        std::to_string(taps_.size()) + " taps");
    for (double t : taps_) {
      detail::require(std::isfinite(t), ErrorKind::kParameter, "non-finite filter tap");
    }
  }

  static FirFilter identity() { return FirFilter({1.0}, 0); }

  std::size_t size() const noexcept { return taps_.size(); }
  std::size_t center() const noexcept { return center_; }
  std::span<const double> taps() const noexcept { return taps_; }
  double operator[](std::size_t i) const { return taps_[i]; }

  FirFilter scaled(double gain) const {
    std::vector<double> t(taps_);
    for (double& v : t) v *= gain;
    return FirFilter(std::move(t), center_);
  }

  friend bool operator==(const FirFilter&, const FirFilter&) = default;

 private:
  std::vector<double> taps_;
  std::size_t center_;
};

}  // namespace waveaug

#endif  // WAVEAUG_SIGNAL_HPP_
