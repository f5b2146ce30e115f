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

// Augments a synthetic two-tone utterance with each scheme, prints the replay
// records and writes the inputs and outputs as WAV plus spectrogram images.
//
//   demo_augment [output_dir] [seed]

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "waveaug/waveaug.hpp"

namespace {

waveaug::Signal two_tone(int fs, double seconds) {
  const auto n = static_cast<std::size_t>(seconds * fs);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    const double envelope = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * t / seconds);
    x[i] = 0.4 * envelope *
           (std::sin(2.0 * std::numbers::pi * 440.0 * t) + 0.5 * std::sin(2.0 * std::numbers::pi * 2500.0 * t));
  }
  return waveaug::Signal(std::move(x), fs);
}

void save(const std::filesystem::path& dir, const std::string& stem, const waveaug::Signal& s) {
  waveaug::write_wav((dir / (stem + ".wav")).string(), s);
  std::ofstream pgm(dir / (stem + ".pgm"), std::ios::binary);
  waveaug::write_pgm(pgm, waveaug::spectrogram(s));
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "demo_out";
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;
  std::filesystem::create_directories(dir);
  try {
    const waveaug::Signal x = two_tone(16000, 2.0);
    save(dir, "clean", x);
    waveaug::Rng rng(seed);
    for (waveaug::Scheme s : waveaug::kAllSchemes) {
      const auto result = waveaug::augment(x, waveaug::AugmentConfig::defaults(s), rng);
      save(dir, std::string(waveaug::to_string(s)), result.output);
      std::cout << result.record.to_line() << '\n';
    }
  } catch (const waveaug::Error& e) {
    std::cerr << "demo: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
