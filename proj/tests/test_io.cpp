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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "waveaug/augment.hpp"
#include "waveaug/config.hpp"
#include "waveaug/error.hpp"
#include "waveaug/spectrogram.hpp"
#include "waveaug/wav.hpp"

namespace waveaug {
namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kIo;
}

std::string error_text(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_wav(bytes);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFormat);
    return e.what();
  }
  ADD_FAILURE() << "decode succeeded";
  return {};
}

void put_u16(std::vector<std::uint8_t>& b, std::size_t at, std::uint16_t v) {
  b[at] = static_cast<std::uint8_t>(v);
  b[at + 1] = static_cast<std::uint8_t>(v >> 8);
}

TEST(Wav, HeaderLayout) {
  const auto bytes = encode_wav(Signal({0.0, 0.5, -1.0}, 16000)).bytes;
  ASSERT_EQ(bytes.size(), 44u + 6u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "RIFF");
  EXPECT_EQ(std::string(bytes.begin() + 8, bytes.begin() + 16), "WAVEfmt ");
  EXPECT_EQ(std::string(bytes.begin() + 36, bytes.begin() + 40), "data");
  // 0.5 * 32768 = 0x4000, -1 * 32768 = 0x8000.
  EXPECT_EQ(bytes[46], 0x00);
  EXPECT_EQ(bytes[47], 0x40);
  EXPECT_EQ(bytes[48], 0x00);
  EXPECT_EQ(bytes[49], 0x80);
}

TEST(Wav, ToneRoundTripIsIdempotent) {
  const Signal tone = test::tone(1000.0, 16000, 16000, 0.7);
  const auto first = encode_wav(tone).bytes;
  const Signal back = decode_wav(first);
  EXPECT_EQ(back.sample_rate(), 16000);
  ASSERT_EQ(back.size(), tone.size());
  for (std::size_t i = 0; i < tone.size(); ++i) EXPECT_NEAR(back[i], tone[i], 0.5 / 32768.0 + 1e-15);
  EXPECT_EQ(encode_wav(back).bytes, first);
}

TEST(Wav, FileRoundTrip) {
  const auto dir = test::scratch_dir("wav");
  const Signal x = test::random_signal(1234, 3, 22050, 0.9);
  write_wav((dir / "a.wav").string(), x);
  const Signal y = read_wav((dir / "a.wav").string());
  write_wav((dir / "b.wav").string(), y);
  EXPECT_EQ(read_file_bytes((dir / "a.wav").string()), read_file_bytes((dir / "b.wav").string()));
  EXPECT_EQ(kind_of([&] { read_wav((dir / "missing.wav").string()); }), ErrorKind::kIo);
}

TEST(Wav, ClippingIsCounted) {
  const WavEncoding enc = encode_wav(Signal({1.2, -1.5, 0.99999, 1.0, -1.0}, 8000));
  // 0.99999 * 32768 rounds to 32768, so only -1.0 survives.
  EXPECT_EQ(enc.clipped, 4u);
  const Signal back = decode_wav(enc.bytes);
  EXPECT_EQ(back[0], 32767.0 / 32768.0);
  EXPECT_EQ(back[1], -1.0);
}

TEST(Wav, StereoRejected) {
  auto bytes = encode_wav(Signal({0.1, 0.2}, 16000)).bytes;
  put_u16(bytes, 22, 2);
  EXPECT_NE(error_text(bytes).find("2 channels"), std::string::npos);
}

TEST(Wav, TruncatedDataNamesByteCounts) {
  auto bytes = encode_wav(Signal(std::vector<double>(100, 0.1), 16000)).bytes;
  bytes.resize(bytes.size() - 50);
  const std::string msg = error_text(bytes);
  EXPECT_NE(msg.find("expected 200 bytes"), std::string::npos) << msg;
  EXPECT_NE(msg.find("got 150"), std::string::npos) << msg;
}

TEST(Wav, MalformedContainers) {
  EXPECT_NE(error_text({'R', 'I', 'F'}).find("too short"), std::string::npos);
  auto bytes = encode_wav(Signal({0.1}, 16000)).bytes;
  auto bad_sig = bytes;
  bad_sig[8] = 'X';
  EXPECT_NE(error_text(bad_sig).find("RIFF/WAVE"), std::string::npos);
  auto float_fmt = bytes;
  put_u16(float_fmt, 20, 3);
  EXPECT_NE(error_text(float_fmt).find("not PCM"), std::string::npos);
  auto bits = bytes;
  put_u16(bits, 34, 24);
  EXPECT_NE(error_text(bits).find("24 bits"), std::string::npos);
  std::vector<std::uint8_t> no_data(bytes.begin(), bytes.begin() + 36);
  EXPECT_NE(error_text(no_data).find("no data chunk"), std::string::npos);
}

TEST(Wav, SkipsUnknownChunks) {
  auto bytes = encode_wav(Signal({0.25, -0.25}, 16000)).bytes;
  const std::vector<std::uint8_t> list{'L', 'I', 'S', 'T', 3, 0, 0, 0, 'a', 'b', 'c', 0};
  bytes.insert(bytes.begin() + 36, list.begin(), list.end());
  const Signal s = decode_wav(bytes);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], 0.25);
}

TEST(Spectrogram, ToneArgmaxAtNearestBin) {
  const Signal x = test::tone(1000.0, 16000, 16000);
  const Spectrogram s = spectrogram(x);
  EXPECT_EQ(s.bins, 257u);
  EXPECT_EQ(s.frames, 1 + (16000 - 400) / 160);
  const std::size_t want = static_cast<std::size_t>(std::lround(1000.0 * 512 / 16000.0));
  for (std::size_t f = 0; f < s.frames; ++f) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < s.bins; ++k) {
      if (s.at(f, k) > s.at(f, best)) best = k;
    }
    ASSERT_EQ(best, want) << "frame " << f;
  }
}

TEST(Spectrogram, SilenceIsFlat) {
  const Spectrogram s = spectrogram(Signal(std::vector<double>(4000, 0.0), 16000));
  for (double v : s.db) EXPECT_EQ(v, -200.0);
  std::ostringstream pgm;
  write_pgm(pgm, s);
  const std::string text = pgm.str();
  const std::string header = "P5\n" + std::to_string(s.frames) + " 257\n255\n";
  ASSERT_EQ(text.substr(0, header.size()), header);
  EXPECT_EQ(text.size(), header.size() + s.frames * s.bins);
}

TEST(Spectrogram, TooShortIsParameterError) {
  EXPECT_EQ(kind_of([] { spectrogram(Signal(std::vector<double>(399, 0.1), 16000)); }), ErrorKind::kParameter);
}

TEST(Spectrogram, PgmOrientationAndRange) {
  // Low tone: bright pixels near the bottom rows.
  const Spectrogram s = spectrogram(test::tone(500.0, 16000, 4000));
  std::ostringstream pgm;
  write_pgm(pgm, s);
  const std::string text = pgm.str();
  const std::string header = "P5\n" + std::to_string(s.frames) + " " + std::to_string(s.bins) + "\n255\n";
  const auto* pix = reinterpret_cast<const unsigned char*>(text.data() + header.size());
  const std::size_t bin = 16;  // 500 Hz
  const std::size_t row = s.bins - 1 - bin;
  EXPECT_GE(pix[row * s.frames + 3], 250);
  EXPECT_LT(pix[3], 128);  // top row: Nyquist
  int lo = 255, hi = 0;
  for (std::size_t i = 0; i < s.frames * s.bins; ++i) {
    lo = std::min<int>(lo, pix[i]);
    hi = std::max<int>(hi, pix[i]);
  }
  EXPECT_EQ(lo, 0);
  EXPECT_EQ(hi, 255);
}

TEST(Spectrogram, CsvLayout) {
  const Spectrogram s = spectrogram(test::tone(500.0, 16000, 800));
  std::ostringstream csv;
  write_csv(csv, s);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 12), "time_s,0,31.");
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), static_cast<long>(s.bins));
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), static_cast<long>(s.bins));
  }
  EXPECT_EQ(rows, s.frames);
}

TEST(Spectrogram, NotchVisibleAtDip) {
  const int fs = 16000;
  AugmentRecord r;
  r.scheme = Scheme::kDoubleNotch;
  r.dip_hz = 6000.0;  // bin 192 of 512
  std::vector<double> xv(8000);
  for (std::size_t i = 0; i < xv.size(); ++i) {
    const double t = static_cast<double>(i) / fs;
    xv[i] = 0.1 * std::sin(2 * std::numbers::pi * 6000.0 * t) + 0.1 * std::sin(2 * std::numbers::pi * 4000.0 * t) +
            0.1 * std::sin(2 * std::numbers::pi * 7500.0 * t);
  }
  const Spectrogram s = spectrogram(apply_transform(Signal(xv, fs), r));
  for (std::size_t f = 1; f + 1 < s.frames; ++f) {
    EXPECT_LT(s.at(f, 192), s.at(f, 128) - 40.0);
    EXPECT_LT(s.at(f, 192), s.at(f, 240) - 40.0);
  }
}

TEST(Config, DefaultsMatchSchemeDefaults) {
  const ToolConfig c = ToolConfig::defaults();
  EXPECT_EQ(c.schemes.at(Scheme::kDoubleNotch).omega_min, 5000.0);
  EXPECT_EQ(c.schemes.at(Scheme::kWidePass).omega_max, 7950.0);
  EXPECT_EQ(c.p_keep, 0.2);
  EXPECT_EQ(c.resolve(Scheme::kBandLimited, 16000).support_for(16000), 400u);
}

TEST(Config, ShippedDefaultsFileEqualsBuiltins) {
  const ToolConfig file = load_config(std::string(WAVEAUG_CONFIG_DIR) + "/defaults.json");
  const ToolConfig builtin = ToolConfig::defaults();
  for (Scheme s : kAllSchemes) {
    const AugmentConfig a = file.resolve(s, 16000), b = builtin.resolve(s, 16000);
    EXPECT_EQ(a.omega_min, b.omega_min);
    EXPECT_EQ(a.omega_max, b.omega_max);
    EXPECT_EQ(a.p, b.p);
    EXPECT_EQ(a.support_for(16000), b.support_for(16000));
    EXPECT_EQ(a.snr.min_db, b.snr.min_db);
    EXPECT_EQ(a.snr.max_db, b.snr.max_db);
    EXPECT_EQ(a.rir.rooms, b.rir.rooms);
    EXPECT_EQ(a.rir.materials, b.rir.materials);
    EXPECT_EQ(a.rir.d_min, b.rir.d_min);
    EXPECT_EQ(a.rir.d_max, b.rir.d_max);
  }
  EXPECT_EQ(file.p_keep, builtin.p_keep);
}

TEST(Config, OverlayAndSupport) {
  const auto doc = nlohmann::json::parse(R"({
    "snr": {"min_db": 10, "max_db": 12},
    "schemes": {"bandlimited": {"omega_max_hz": 600, "support_ms": 20, "snr": {"max_db": 11}},
                "rir": {"rooms": [[3, 3, 3]], "d_max_m": 1.5}},
    "online": {"p_keep": 0.5}})");
  const ToolConfig c = apply_config(ToolConfig::defaults(), doc);
  const AugmentConfig bl = c.resolve(Scheme::kBandLimited, 16000);
  EXPECT_EQ(bl.omega_min, 50.0);
  EXPECT_EQ(bl.omega_max, 600.0);
  EXPECT_EQ(bl.support_for(16000), 320u);
  EXPECT_EQ(bl.snr.min_db, 10.0);
  EXPECT_EQ(bl.snr.max_db, 11.0);
  EXPECT_EQ(c.resolve(Scheme::kDoubleNotch, 16000).snr.max_db, 12.0);
  EXPECT_EQ(c.schemes.at(Scheme::kNoisyRir).rir.rooms.size(), 1u);
  EXPECT_EQ(c.schemes.at(Scheme::kNoisyRir).rir.d_max, 1.5);
  EXPECT_EQ(c.p_keep, 0.5);
}

TEST(Config, RejectsUnknownKeysAndBadTypes) {
  auto apply = [](const char* text) { apply_config(ToolConfig::defaults(), nlohmann::json::parse(text)); };
  EXPECT_EQ(kind_of([&] { apply(R"({"snrr": {}})"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { apply(R"({"schemes": {"reverb": {}}})"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { apply(R"({"schemes": {"notch": {"omega": 1}}})"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { apply(R"({"schemes": {"notch": {"p": "eight"}}})"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { apply(R"({"schemes": {"rir": {"rooms": [[1, 2]]}}})"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { apply(R"({"snr": {"min_db": 30, "max_db": 10}})"); }), ErrorKind::kParameter);
  EXPECT_EQ(kind_of([&] { apply(R"({"online": {"p_keep": 2}})"); }), ErrorKind::kParameter);
}

TEST(Config, FileErrors) {
  const auto dir = test::scratch_dir("config");
  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_EQ(kind_of([&] { load_config((dir / "broken.json").string()); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { load_config((dir / "absent.json").string()); }), ErrorKind::kIo);
}

TEST(Config, RegistryPathRelativeToConfig) {
  const auto dir = test::scratch_dir("config_registry");
  std::ofstream(dir / "mats.json") << R"({"materials": {"felt": 0.6}})";
  std::ofstream(dir / "cfg.json") << R"({"schemes": {"rir": {"material_registry": "mats.json", "materials": ["felt"]}}})";
  const ToolConfig c = load_config((dir / "cfg.json").string());
  EXPECT_EQ(c.schemes.at(Scheme::kNoisyRir).rir.registry.absorption("felt"), 0.6);
}

}  // namespace
}  // namespace waveaug
