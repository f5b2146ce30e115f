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

#ifndef WAVEAUG_WAV_HPP_
#define WAVEAUG_WAV_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "waveaug/error.hpp"
#include "waveaug/signal.hpp"

namespace waveaug {

// RIFF/WAVE, PCM 16-bit little-endian, mono. Samples map to [-1, 1) by
// division by 32768.

namespace detail {

inline std::uint32_t read_u32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return std::uint32_t{b[at]} | (std::uint32_t{b[at + 1]} << 8) | (std::uint32_t{b[at + 2]} << 16) |
         (std::uint32_t{b[at + 3]} << 24);
}

inline std::uint16_t read_u16(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

inline void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_tag(std::vector<std::uint8_t>& b, const char* tag) { b.insert(b.end(), tag, tag + 4); }

inline bool tag_is(const std::vector<std::uint8_t>& b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

}  // namespace detail

inline Signal decode_wav(const std::vector<std::uint8_t>& bytes) {
  using detail::require;
  require(bytes.size() >= 12, ErrorKind::kFormat,
          "wav: " + std::to_string(bytes.size()) + " bytes is too short for a RIFF header");
  require(detail::tag_is(bytes, 0, "RIFF") && detail::tag_is(bytes, 8, "WAVE"), ErrorKind::kFormat,
          "wav: missing RIFF/WAVE signature");

  bool have_fmt = false;
  int sample_rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::size_t size = detail::read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (detail::tag_is(bytes, pos, "fmt ")) {
      require(size >= 16 && body + 16 <= bytes.size(), ErrorKind::kFormat,
              "wav: fmt chunk is " + std::to_string(size) + " bytes, need 16");
      const std::uint16_t tag = detail::read_u16(bytes, body);
      const std::uint16_t channels = detail::read_u16(bytes, body + 2);
      const std::uint32_t rate = detail::read_u32(bytes, body + 4);
      const std::uint16_t bits = detail::read_u16(bytes, body + 14);
      require(tag == 1, ErrorKind::kFormat,
              "wav: fmt chunk format tag " + std::to_string(tag) + " is not PCM (1)");
      require(channels == 1, ErrorKind::kFormat,
              "wav: fmt chunk declares " + std::to_string(channels) + " channels, only mono is supported");
      require(bits == 16, ErrorKind::kFormat,
              "wav: fmt chunk declares " + std::to_string(bits) + " bits per sample, only 16 is supported");
      require(rate > 0 && rate <= 1u << 30, ErrorKind::kFormat, "wav: fmt chunk has invalid sample rate");
      sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (detail::tag_is(bytes, pos, "data")) {
      require(have_fmt, ErrorKind::kFormat, "wav: data chunk before fmt chunk");
      const std::size_t available = bytes.size() - body;
      require(available >= size, ErrorKind::kFormat,
              "wav: truncated data chunk, expected " + std::to_string(size) + " bytes, got " +
                  std::to_string(available));
      require(size % 2 == 0, ErrorKind::kFormat,
              "wav: data chunk size " + std::to_string(size) + " is not a whole number of samples");
      std::vector<double> samples(size / 2);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto raw = static_cast<std::int16_t>(detail::read_u16(bytes, body + 2 * i));
        samples[i] = raw / 32768.0;
      }
      return Signal(std::move(samples), sample_rate);
    }
    pos = body + size + (size & 1);
  }
  detail::fail(ErrorKind::kFormat, have_fmt ? "wav: no data chunk" : "wav: no fmt chunk");
}

struct WavEncoding {
  std::vector<std::uint8_t> bytes;
  std::size_t clipped = 0;  // samples outside [-1, 1) that were hard-clipped
};

inline WavEncoding encode_wav(const Signal& x) {
  WavEncoding enc;
  auto& b = enc.bytes;
  const auto data_bytes = static_cast<std::uint32_t>(2 * x.size());
  b.reserve(44 + data_bytes);
  detail::put_tag(b, "RIFF");
  detail::put_u32(b, 36 + data_bytes);
  detail::put_tag(b, "WAVE");
  detail::put_tag(b, "fmt ");
  detail::put_u32(b, 16);
  detail::put_u16(b, 1);
  detail::put_u16(b, 1);
  detail::put_u32(b, static_cast<std::uint32_t>(x.sample_rate()));
  detail::put_u32(b, static_cast<std::uint32_t>(x.sample_rate()) * 2);
  detail::put_u16(b, 2);
  detail::put_u16(b, 16);
  detail::put_tag(b, "data");
  detail::put_u32(b, data_bytes);
  for (double v : x.samples()) {
    double q = std::nearbyint(v * 32768.0);
    if (q > 32767.0 || q < -32768.0) {
      ++enc.clipped;
      q = std::clamp(q, -32768.0, 32767.0);
    }
    detail::put_u16(b, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return enc;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  detail::require(static_cast<bool>(in), ErrorKind::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  detail::require(static_cast<bool>(out), ErrorKind::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  detail::require(static_cast<bool>(out), ErrorKind::kIo, "short write to " + path);
}

inline Signal read_wav(const std::string& path) {
  try {
    return decode_wav(read_file_bytes(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kFormat) detail::fail(ErrorKind::kFormat, path + ": " + e.what());
    throw;
  }
}

// Returns the number of clipped samples.
inline std::size_t write_wav(const std::string& path, const Signal& x) {
  WavEncoding enc = encode_wav(x);
  write_file_bytes(path, enc.bytes);
  return enc.clipped;
}

}  // namespace waveaug

#endif  // WAVEAUG_WAV_HPP_
