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

#ifndef WAVEAUG_TOOLS_WAVEAUG_CLI_HPP_
#define WAVEAUG_TOOLS_WAVEAUG_CLI_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "waveaug/waveaug.hpp"

namespace waveaug::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

inline std::string error_line(const Error& e) {
  std::string msg = e.what();
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  return "waveaug: error[" + std::string(to_string(e.kind())) + "]: " + msg;
}

// "4x4x2.5" or "4,4,2.5".
inline Point3 parse_dims(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), 'x', ',');
  std::istringstream in(s);
  Point3 p{};
  char sep = 0;
  if (!(in >> p[0] >> sep >> p[1] >> sep >> p[2]) || !in.eof()) {
    detail::fail(ErrorKind::kParameter, "cannot parse room dimensions '" + text + "', expected LxWxH");
  }
  return p;
}

namespace detail {

struct AugmentOptions {
  std::string scheme = "bandlimited";
  std::uint64_t seed = 0;
  std::optional<double> snr_min;
  std::optional<double> snr_max;
  std::optional<double> omega_min;
  std::optional<double> omega_max;
  std::optional<std::size_t> p;
  std::string config;
  unsigned threads = 1;
  std::string input;
  std::string output;
};

inline ToolConfig layered_config(const AugmentOptions& o) {
  ToolConfig cfg = o.config.empty() ? ToolConfig::defaults() : load_config(o.config);
  for (auto& [s, c] : cfg.schemes) {
    if (o.snr_min) c.snr.min_db = *o.snr_min;
    if (o.snr_max) c.snr.max_db = *o.snr_max;
    c.snr.validate();
    if (s == Scheme::kNoisyRir) continue;
    if (o.omega_min) c.omega_min = *o.omega_min;
    if (o.omega_max) c.omega_max = *o.omega_max;
    if (o.p) c.p = *o.p;
  }
  return cfg;
}

struct FileOutcome {
  std::string log;
  std::size_t clipped = 0;
};

inline FileOutcome augment_file(const fs::path& in, const fs::path& out, const AugmentOptions& o,
                                const ToolConfig& cfg, Rng rng) {
  const Signal x = read_wav(in.string());
  AugmentResult result = [&] {
    if (o.scheme == "random") {
      std::vector<AugmentConfig> all;
      for (Scheme s : kAllSchemes) all.push_back(cfg.resolve(s, x.sample_rate()));
      return online_augment(x, all, cfg.p_keep, rng);
    }
    AugmentConfig c = cfg.resolve(parse_scheme(o.scheme), x.sample_rate());
    return augment(x, c, rng);
  }();
  FileOutcome outcome;
  outcome.clipped = write_wav(out.string(), result.output);
  outcome.log = result.record.to_line();
  return outcome;
}

inline int run_augment(const AugmentOptions& o, std::ostream& out, std::ostream& err) {
  if (o.scheme != "random") parse_scheme(o.scheme);
  const ToolConfig cfg = layered_config(o);
  const fs::path in(o.input);
  if (!fs::is_directory(in)) {
    const FileOutcome r = augment_file(in, o.output, o, cfg, Rng(o.seed));
    out << r.log << '\n';
    if (r.clipped > 0) err << "waveaug: warning: clipped " << r.clipped << " samples in " << o.output << '\n';
    return kOk;
  }

  // Batch mode: file i (in name order) uses substream i of the seed.
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(in)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  fs::create_directories(o.output);
  std::vector<FileOutcome> outcomes(files.size());
  std::vector<std::exception_ptr> failures(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      try {
        const Rng rng = Rng(o.seed).derive(i);
        outcomes[i] = augment_file(files[i], fs::path(o.output) / files[i].filename(), o, cfg, rng);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  {
    const unsigned n = std::max(1u, std::min<unsigned>(o.threads, static_cast<unsigned>(files.size())));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (failures[i]) {
      try {
        std::rethrow_exception(failures[i]);
      } catch (const Error& e) {
        waveaug::detail::fail(e.kind(), files[i].filename().string() + ": " + e.what());
      }
    }
    out << "file=" << files[i].filename().string() << ' ' << outcomes[i].log << '\n';
    if (outcomes[i].clipped > 0) {
      err << "waveaug: warning: clipped " << outcomes[i].clipped << " samples in "
          << files[i].filename().string() << '\n';
    }
  }
  return kOk;
}

struct RirOptions {
  std::string room = "4x4x2.5";
  std::string material = "hard surface";
  std::string registry;
  double distance = 1.0;
  std::uint64_t seed = 0;
  int sample_rate = 16000;
  int max_order = 8;
  double speed_of_sound = 343.0;
  std::string output;
};

inline int run_rir(const RirOptions& o, std::ostream& out, std::ostream& err) {
  const MaterialRegistry registry = o.registry.empty() ? MaterialRegistry::defaults() : MaterialRegistry::load(o.registry);
  RoomConfig room;
  room.dims = parse_dims(o.room);
  room.material = o.material;
  room.absorption = registry.absorption(o.material);
  room.max_order = o.max_order;
  room.speed_of_sound = o.speed_of_sound;
  room.validate();
  Rng rng(o.seed);
  const SourceMicGeometry geo = sample_geometry(room, o.distance, o.distance, rng);
  const Rir rir = image_source_rir(room, geo, o.sample_rate);
  const std::size_t clipped = write_wav(o.output, rir.response);
  char buf[160];
  std::snprintf(buf, sizeof buf, "length=%zu direct_index=%zu arrivals=%zu truncated=%d distance_m=%.17g",
                rir.response.size(), rir.direct_index, rir.arrivals.size(), rir.truncated ? 1 : 0, geo.distance);
  out << buf << '\n';
  if (clipped > 0) err << "waveaug: warning: clipped " << clipped << " samples in " << o.output << '\n';
  return kOk;
}

struct FilterOptions {
  std::string type = "parzen";
  int sample_rate = 16000;
  double eta = 1000.0;
  std::optional<double> xi;
  std::optional<double> gamma_w;
  double support_ms = 25.0;
  double dip = 1000.0;
};

inline int run_design_filter(const FilterOptions& o, std::ostream& out, std::ostream& err) {
  if (o.type == "notch") {
    write_taps(out, notch_filter({o.dip}, o.sample_rate));
    return kOk;
  }
  const auto support = static_cast<std::size_t>(std::lround(o.support_ms * 1e-3 * o.sample_rate));
  waveaug::detail::require(o.xi.has_value() != o.gamma_w.has_value(), ErrorKind::kParameter,
                           "design-filter: give exactly one of --xi or --gamma");
  const double gamma = o.gamma_w ? *o.gamma_w : bandwidth_to_gamma(*o.xi, o.sample_rate, support);
  const ParzenDesign d = parzen_filter({o.eta, gamma, support}, o.sample_rate);
  if (d.truncated) err << "waveaug: warning: window support truncated to " << support << " taps\n";
  write_taps(out, d.filter);
  return kOk;
}

struct TheoremOptions {
  std::string statistic = "identity";
  double sigma = 0.1;
  double delta = 0.3;
  std::size_t samples = 10000;
  std::size_t dim = 2;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// Linear and quadratic statistics get fixed coefficients drawn from the seed's
// substream 1; the evaluation point is the all-ones vector.
inline StatisticFn cli_statistic(const TheoremOptions& o) {
  waveaug::detail::require(o.dim >= 1, ErrorKind::kParameter, "verify-theorem: --dim must be >= 1");
  const auto d = static_cast<Eigen::Index>(o.dim);
  Rng coef(o.seed, 1);
  auto draw = [&](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = coef.normal();
    }
    return m;
  };
  if (o.statistic == "identity") return identity_statistic(o.dim);
  if (o.statistic == "linear") return linear_statistic(draw(d, d));
  if (o.statistic == "quadratic") {
    std::vector<Eigen::MatrixXd> forms;
    for (Eigen::Index j = 0; j < d; ++j) {
      const Eigen::MatrixXd m = draw(d, d);
      forms.push_back(0.5 * (m + m.transpose()));
    }
    return quadratic_statistic(std::move(forms));
  }
  waveaug::detail::fail(ErrorKind::kParameter, "verify-theorem: unknown statistic '" + o.statistic + "'");
}

inline int run_verify(const TheoremOptions& o, std::ostream& out) {
  const StatisticFn psi = cli_statistic(o);
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(o.dim));
  const BoundReport r = verify_bound(psi, x, o.sigma, o.delta, o.samples, Rng(o.seed), o.threads);
  out << r.to_text() << '\n';
  return kOk;
}

struct VicinalOptions {
  std::string input;
  std::string output;
  std::size_t m = 4;
  std::uint64_t seed = 0;
  std::string config;
};

// The density holds one frozen component per scheme, drawn from substream 0;
// the samples use substream 1.
inline int run_sample_vicinal(const VicinalOptions& o, std::ostream& out, std::ostream& err) {
  const ToolConfig cfg = o.config.empty() ? ToolConfig::defaults() : load_config(o.config);
  const Signal x = read_wav(o.input);
  std::vector<AugmentConfig> configs;
  for (Scheme s : kAllSchemes) configs.push_back(cfg.resolve(s, x.sample_rate()));
  Rng density_rng(o.seed, 0);
  const VicinalDensity density = scheme_density(configs, x.sample_rate(), density_rng);
  Rng sample_rng(o.seed, 1);
  const auto samples = sample_vicinal(x, density, o.m, sample_rng);
  fs::create_directories(o.output);
  char name[32];
  for (std::size_t j = 0; j < samples.size(); ++j) {
    std::snprintf(name, sizeof name, "vicinal_%04zu.wav", j);
    const fs::path path = fs::path(o.output) / name;
    const std::size_t clipped = write_wav(path.string(), samples[j].signal);
    if (clipped > 0) err << "waveaug: warning: clipped " << clipped << " samples in " << name << '\n';
    const auto& comp = density.components[samples[j].component];
    out << "file=" << name << " component=" << samples[j].component << " snr_db="
        << waveaug::detail::fmt_double(samples[j].noise_level) << ' ' << comp.label << '\n';
  }
  return kOk;
}

}  // namespace detail

// Runs the command line; returns the process exit code. Usage errors print
// the help text on `err` and return 1; data errors print a single
// "waveaug: error[kind]: ..." line and return 2.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Waveform augmentation, room simulation and local-robustness checks", "waveaug"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  detail::AugmentOptions aug;
  auto* augment_cmd = app.add_subcommand("augment", "Augment one WAV file or every .wav in a directory");
  augment_cmd->add_option("--scheme", aug.scheme, "bandlimited|notch|widepass|rir|random")
      ->check(CLI::IsMember({"bandlimited", "notch", "widepass", "rir", "random"}));
  augment_cmd->add_option("--seed", aug.seed);
  augment_cmd->add_option("--snr-min", aug.snr_min, "dB");
  augment_cmd->add_option("--snr-max", aug.snr_max, "dB");
  augment_cmd->add_option("--omega-min", aug.omega_min, "Hz");
  augment_cmd->add_option("--omega-max", aug.omega_max, "Hz");
  augment_cmd->add_option("--p", aug.p, "filter count");
  augment_cmd->add_option("--config", aug.config, "JSON config file");
  augment_cmd->add_option("--threads", aug.threads, "batch workers")->check(CLI::PositiveNumber);
  augment_cmd->add_option("input", aug.input)->required();
  augment_cmd->add_option("output", aug.output)->required();

  detail::RirOptions rir;
  auto* rir_cmd = app.add_subcommand("rir", "Write a simulated room impulse response");
  rir_cmd->add_option("--room", rir.room, "LxWxH in meters");
  rir_cmd->add_option("--material", rir.material);
  rir_cmd->add_option("--registry", rir.registry, "material registry JSON");
  rir_cmd->add_option("--distance", rir.distance, "source-mic distance, m");
  rir_cmd->add_option("--seed", rir.seed);
  rir_cmd->add_option("--rate", rir.sample_rate)->check(CLI::PositiveNumber);
  rir_cmd->add_option("--max-order", rir.max_order)->check(CLI::NonNegativeNumber);
  rir_cmd->add_option("--speed-of-sound", rir.speed_of_sound);
  rir_cmd->add_option("output", rir.output)->required();

  detail::FilterOptions filt;
  auto* filter_cmd = app.add_subcommand("design-filter", "Print the taps of a Parzen or notch filter");
  filter_cmd->add_option("--type", filt.type)->check(CLI::IsMember({"parzen", "notch"}));
  filter_cmd->add_option("--rate", filt.sample_rate)->check(CLI::PositiveNumber);
  filter_cmd->add_option("--eta", filt.eta, "center frequency, Hz");
  filter_cmd->add_option("--xi", filt.xi, "-3 dB bandwidth, Hz");
  filter_cmd->add_option("--gamma", filt.gamma_w, "window parameter, 1/s^2");
  filter_cmd->add_option("--support-ms", filt.support_ms);
  filter_cmd->add_option("--dip", filt.dip, "notch frequency, Hz");

  std::string spec_in, spec_pgm, spec_csv;
  auto* spec_cmd = app.add_subcommand("spectrogram", "Log-magnitude spectrogram as PGM and optional CSV");
  spec_cmd->add_option("input", spec_in)->required();
  spec_cmd->add_option("pgm", spec_pgm)->required();
  spec_cmd->add_option("csv", spec_csv);

  detail::TheoremOptions thm;
  auto* verify_cmd = app.add_subcommand("verify-theorem", "Monte-Carlo check of the concentration radius");
  verify_cmd->add_option("--statistic", thm.statistic)->check(CLI::IsMember({"identity", "linear", "quadratic"}));
  verify_cmd->add_option("--sigma", thm.sigma);
  verify_cmd->add_option("--delta", thm.delta);
  verify_cmd->add_option("--samples", thm.samples);
  verify_cmd->add_option("--dim", thm.dim);
  verify_cmd->add_option("--seed", thm.seed);
  verify_cmd->add_option("--threads", thm.threads)->check(CLI::PositiveNumber);

  detail::VicinalOptions vic;
  auto* vicinal_cmd = app.add_subcommand("sample-vicinal", "Draw samples from the scheme mixture around a WAV file");
  vicinal_cmd->add_option("--m", vic.m);
  vicinal_cmd->add_option("--seed", vic.seed);
  vicinal_cmd->add_option("--config", vic.config);
  vicinal_cmd->add_option("input", vic.input)->required();
  vicinal_cmd->add_option("output", vic.output, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "waveaug: usage: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (augment_cmd->parsed()) return detail::run_augment(aug, out, err);
    if (rir_cmd->parsed()) return detail::run_rir(rir, out, err);
    if (filter_cmd->parsed()) return detail::run_design_filter(filt, out, err);
    if (spec_cmd->parsed()) {
      const Spectrogram s = spectrogram(read_wav(spec_in));
      std::ofstream pgm(spec_pgm, std::ios::binary);
      waveaug::detail::require(static_cast<bool>(pgm), ErrorKind::kIo, "cannot write " + spec_pgm);
      write_pgm(pgm, s);
      if (!spec_csv.empty()) {
        std::ofstream csv(spec_csv);
        waveaug::detail::require(static_cast<bool>(csv), ErrorKind::kIo, "cannot write " + spec_csv);
        write_csv(csv, s);
      }
      out << "frames=" << s.frames << " bins=" << s.bins << '\n';
      return kOk;
    }
    if (verify_cmd->parsed()) return detail::run_verify(thm, out);
    if (vicinal_cmd->parsed()) return detail::run_sample_vicinal(vic, out, err);
  } catch (const Error& e) {
    err << error_line(e) << '\n';
    return kData;
  } catch (const fs::filesystem_error& e) {
    err << "waveaug: error[io]: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "waveaug: error[internal]: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace waveaug::cli

#endif  // WAVEAUG_TOOLS_WAVEAUG_CLI_HPP_
