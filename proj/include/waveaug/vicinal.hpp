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

#ifndef WAVEAUG_VICINAL_HPP_
#define WAVEAUG_VICINAL_HPP_

#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "waveaug/augment.hpp"
#include "waveaug/dsp.hpp"
#include "waveaug/error.hpp"
#include "waveaug/rng.hpp"
#include "waveaug/signal.hpp"

namespace waveaug {

using SignalMap = std::function<Signal(const Signal&)>;

// One Gaussian of the vicinal mixture: mean transform(x), offset noise with
// either a fixed amplitude deviation or an SNR range resolved against the
// transformed signal. An optional filter colors the offset.
struct VicinalComponent {
  SignalMap transform;  // identity when empty
  std::variant<double, SnrRange> sigma = 0.0;
  std::optional<FirFilter> noise_filter;
  std::string label;

  Signal mean(const Signal& x) const { return transform ? transform(x) : x; }
};

// Equal-weight mixture (1/K) sum_k N(mu_k(x), sigma_k^2 I).
struct VicinalDensity {
  std::vector<VicinalComponent> components;

  std::size_t size() const noexcept { return components.size(); }

  static VicinalDensity isotropic(double sigma) {
    VicinalDensity d;
    d.components.push_back({{}, sigma, std::nullopt, "identity"});
    return d;
  }
};

// Freezes one draw of a scheme's filter, dip or room as a mixture component.
inline VicinalComponent freeze_scheme(const AugmentConfig& cfg, int sample_rate, Rng& rng) {
  const AugmentRecord record = draw_parameters(cfg, sample_rate, rng);
  VicinalComponent c;
  c.transform = [record](const Signal& x) { return apply_transform(x, record); };
  c.sigma = cfg.snr;
  c.noise_filter = noise_shaping_filter(record, sample_rate);
  c.label = record.to_line();
  return c;
}

// One frozen component per configured scheme.
inline VicinalDensity scheme_density(std::span<const AugmentConfig> configs, int sample_rate, Rng& rng) {
  VicinalDensity d;
  for (const auto& cfg : configs) d.components.push_back(freeze_scheme(cfg, sample_rate, rng));
  return d;
}

struct VicinalSample {
  Signal signal;
  std::size_t component = 0;
  // Amplitude deviation for fixed-sigma components, drawn SNR (dB) otherwise.
  double noise_level = 0.0;
};

// Monte-Carlo draws x_j = mu_k'(x) + eps_k' with k' uniform over components.
inline std::vector<VicinalSample> sample_vicinal(const Signal& x, const VicinalDensity& density, std::size_t m,
                                                 Rng& rng) {
  detail::require(density.size() >= 1, ErrorKind::kParameter, "sample_vicinal: density has no components");
  detail::require(m >= 1, ErrorKind::kParameter, "sample_vicinal: m must be >= 1");
  detail::require(!x.empty(), ErrorKind::kEmptyInput, "sample_vicinal: empty input signal");
  std::vector<VicinalSample> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t k = rng.uniform_index(density.size());
    const VicinalComponent& comp = density.components[k];
    const Signal mu = comp.mean(x);
    if (const double* amp = std::get_if<double>(&comp.sigma)) {
      if (*amp == 0.0) {
        out.push_back({mu, k, 0.0});
        continue;
      }
      Signal eps = white_noise(mu.size(), mu.sample_rate(), rng);
      if (comp.noise_filter) eps = convolve_same(eps, *comp.noise_filter);
      out.push_back({add(mu, scale(eps, *amp)), k, *amp});
    } else {
      const auto& range = std::get<SnrRange>(comp.sigma);
      const double gamma = range.draw(rng);
      Signal eps = white_noise(mu.size(), mu.sample_rate(), rng);
      if (comp.noise_filter) eps = convolve_same(eps, *comp.noise_filter);
      out.push_back({add(mu, snr_scale(eps, mu, gamma)), k, gamma});
    }
  }
  return out;
}

inline constexpr double kDefaultKeepProbability = 0.2;

// Keep-or-perturb policy: returns x unchanged with probability p_keep,
// otherwise applies a uniformly drawn scheme.
inline AugmentResult online_augment(const Signal& x, std::span<const AugmentConfig> schemes, double p_keep,
                                    Rng& rng) {
  detail::require(p_keep >= 0.0 && p_keep <= 1.0, ErrorKind::kParameter,
                  "online_augment: p_keep must lie in [0, 1]");
  detail::require(!schemes.empty() || p_keep >= 1.0, ErrorKind::kParameter,
                  "online_augment: no schemes to apply with p_keep < 1");
  AugmentRecord keep = detail::start_record(Scheme::kIdentity, rng);
  if (rng.uniform() < p_keep) return {x, keep};
  const auto& cfg = schemes[rng.uniform_index(schemes.size())];
  return augment(x, cfg, rng);
}

class ProbVector {
 public:
  explicit ProbVector(std::vector<double> p) : p_(std::move(p)) {
    detail::require(!p_.empty(), ErrorKind::kShape, "probability vector is empty");
    double sum = 0.0;
    for (double v : p_) {
      detail::require(std::isfinite(v) && v >= 0.0, ErrorKind::kParameter, "probabilities must be finite and >= 0");
      sum += v;
    }
    detail::require(std::abs(sum - 1.0) <= 1e-9, ErrorKind::kParameter,
                    "probabilities sum to " + std::to_string(sum) + ", expected 1");
  }

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const noexcept { return p_; }

 private:
  std::vector<double> p_;
};

// q(y | x) = (1/s) sum_i p(y | T_i(x)).
inline ProbVector smooth_predict(std::span<const ProbVector> vectors) {
  detail::require(!vectors.empty(), ErrorKind::kParameter, "smooth_predict: no probability vectors");
  const std::size_t dim = vectors.front().size();
  std::vector<double> mean(dim, 0.0);
  for (const auto& v : vectors) {
    detail::require(v.size() == dim, ErrorKind::kShape,
                    "smooth_predict: label dimension " + std::to_string(v.size()) + " vs " + std::to_string(dim));
    for (std::size_t i = 0; i < dim; ++i) mean[i] += v[i];
  }
  for (double& v : mean) v /= static_cast<double>(vectors.size());
  return ProbVector(std::move(mean));
}

struct LabeledSignal {
  Signal signal;
  std::size_t label = 0;
};

// Returns log p(label | signal); must be finite.
using LogLikelihood = std::function<double(const Signal&, std::size_t)>;

struct NllEstimate {
  double value = 0.0;      // -(1/mn) sum_ij log p(y_i | x_ij)
  double std_error = 0.0;  // standard error of the mean over all mn terms
  std::size_t count = 0;
};

// Monte-Carlo vicinal negative log-likelihood with m draws per pair.
inline NllEstimate vicinal_nll_estimate(const LogLikelihood& evaluator, std::span<const LabeledSignal> pairs,
                                        const VicinalDensity& density, std::size_t m, Rng& rng) {
  detail::require(!pairs.empty(), ErrorKind::kParameter, "vicinal_nll: no training pairs");
  detail::require(static_cast<bool>(evaluator), ErrorKind::kParameter, "vicinal_nll: no evaluator");
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto samples = sample_vicinal(pairs[i].signal, density, m, rng);
    for (std::size_t j = 0; j < samples.size(); ++j) {
      const auto where = "pair " + std::to_string(i) + " sample " + std::to_string(j) + " (component " +
                         std::to_string(samples[j].component) + ")";
      double logp = 0.0;
      try {
        logp = evaluator(samples[j].signal, pairs[i].label);
      } catch (const std::exception& e) {
        detail::fail(ErrorKind::kEvaluation, "vicinal_nll: evaluator failed on " + where + ": " + e.what());
      }
      detail::require(std::isfinite(logp), ErrorKind::kEvaluation,
                      "vicinal_nll: non-finite log-likelihood on " + where);
      sum -= logp;
      sum_sq += logp * logp;
      ++count;
    }
  }
  const double n = static_cast<double>(count);
  const double mean = sum / n;
  const double var = count > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(var / n), count};
}

inline double vicinal_nll(const LogLikelihood& evaluator, std::span<const LabeledSignal> pairs,
                          const VicinalDensity& density, std::size_t m, Rng& rng) {
  return vicinal_nll_estimate(evaluator, pairs, density, m, rng).value;
}

}  // namespace waveaug

#endif  // WAVEAUG_VICINAL_HPP_
