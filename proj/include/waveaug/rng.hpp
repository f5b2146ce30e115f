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

#ifndef WAVEAUG_RNG_HPP_
#define WAVEAUG_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace waveaug {

// Counter-based generator: Philox4x32 with 10 rounds (Salmon et al., SC'11).
// The 64-bit seed is the Philox key; the 128-bit counter is split into a
// 64-bit block index and a 64-bit stream id. Every draw is a pure function of
// (seed, stream, position), so streams can be sought and split without
// shared state. Bump kRngVersion whenever the output sequence changes.
inline constexpr const char* kRngName = "philox4x32-10";
inline constexpr int kRngVersion = 1;

using PhiloxBlock = std::array<std::uint32_t, 4>;

constexpr PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t position = 0)
      : seed_(seed), stream_(stream), position_(position) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  // Number of 64-bit words consumed so far.
  std::uint64_t position() const noexcept { return position_; }

  std::uint64_t next_u64() {
    const std::uint64_t block = position_ >> 1;
    if (!cached_ || block != cached_block_) {
      cache_ = philox4x32_10(
          {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
           static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
          {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
      cached_block_ = block;
      cached_ = true;
    }
    const std::size_t half = (position_ & 1u) * 2;
    ++position_;
    return (std::uint64_t{cache_[half + 1]} << 32) | cache_[half];
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) {
        return r % n;
      }
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller, cosine branch only; consumes two words.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Fills with i.i.d. N(0, 1) using both Box-Muller branches; consumes
  // 2 * ceil(n / 2) words.
  void fill_normal(std::span<double> out) {
    std::size_t i = 0;
    while (i < out.size()) {
      const double u1 = 1.0 - uniform();
      const double u2 = uniform();
      const double radius = std::sqrt(-2.0 * std::log(u1));
      const double angle = 2.0 * std::numbers::pi * u2;
      out[i++] = radius * std::cos(angle);
      if (i < out.size()) {
        out[i++] = radius * std::sin(angle);
      }
    }
  }

  // Independent substream keyed by (seed, stream, index); used to give each
  // batch item or Monte-Carlo chunk its own reproducible sequence.
  Rng derive(std::uint64_t index) const {
    return Rng(seed_, splitmix64(stream_ ^ splitmix64(index + 0x5851F42D4C957F2Dull)));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_;
  PhiloxBlock cache_{};
  std::uint64_t cached_block_ = 0;
  bool cached_ = false;
};

}  // namespace waveaug

#endif  // WAVEAUG_RNG_HPP_
