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

#ifndef WAVEAUG_THEORY_HPP_
#define WAVEAUG_THEORY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "waveaug/error.hpp"
#include "waveaug/rng.hpp"

namespace waveaug {

// Map R^d -> R^D whose local stability is being checked. sigma_max certifies
// the noise scale up to which third-order Taylor terms are negligible;
// verify_bound refuses to run without it.
struct StatisticFn {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn;
  std::optional<double> sigma_max;
  bool reentrant = false;
  std::string name = "custom";

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const {
    detail::require(static_cast<std::size_t>(x.size()) == in_dim, ErrorKind::kShape,
                    name + ": expected input dimension " + std::to_string(in_dim));
    Eigen::VectorXd y = fn(x);
    detail::require(static_cast<std::size_t>(y.size()) == out_dim, ErrorKind::kEvaluation,
                    name + ": returned dimension " + std::to_string(y.size()) + ", declared " +
                        std::to_string(out_dim));
    detail::require(y.allFinite(), ErrorKind::kEvaluation, name + ": non-finite output");
    return y;
  }
};

inline StatisticFn identity_statistic(std::size_t d) {
  return {d, d, [](const Eigen::VectorXd& x) { return x; }, std::numeric_limits<double>::infinity(), true,
          "identity"};
}

// Psi(x) = W x with W of shape D x d.
inline StatisticFn linear_statistic(Eigen::MatrixXd w) {
  const auto d = static_cast<std::size_t>(w.cols());
  const auto out = static_cast<std::size_t>(w.rows());
  return {d, out, [w = std::move(w)](const Eigen::VectorXd& x) -> Eigen::VectorXd { return w * x; },
          std::numeric_limits<double>::infinity(), true, "linear"};
}

// Psi_j(x) = x^T A_j x. Exactly quadratic, so any sigma is certified.
inline StatisticFn quadratic_statistic(std::vector<Eigen::MatrixXd> forms) {
  detail::require(!forms.empty(), ErrorKind::kParameter, "quadratic_statistic: no forms");
  const auto d = static_cast<std::size_t>(forms.front().rows());
  const std::size_t out = forms.size();
  return {d, out,
          [forms = std::move(forms)](const Eigen::VectorXd& x) -> Eigen::VectorXd {
            Eigen::VectorXd y(static_cast<Eigen::Index>(forms.size()));
            for (std::size_t j = 0; j < forms.size(); ++j) y(static_cast<Eigen::Index>(j)) = x.dot(forms[j] * x);
            return y;
          },
          std::numeric_limits<double>::infinity(), true, "quadratic"};
}

inline double default_fd_step(const Eigen::VectorXd& x) {
  return 1e-4 * (1.0 + (x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0));
}

// Central differences: J(i, j) = d Psi_j / d x_i, shape d x D.
inline Eigen::MatrixXd jacobian_fd(const StatisticFn& psi, const Eigen::VectorXd& x, double h) {
  detail::require(h > 0.0, ErrorKind::kParameter, "jacobian_fd: step must be positive");
  const auto d = static_cast<Eigen::Index>(psi.in_dim);
  Eigen::MatrixXd jac(d, static_cast<Eigen::Index>(psi.out_dim));
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::VectorXd plus = x;
    Eigen::VectorXd minus = x;
    plus(i) += h;
    minus(i) -= h;
    jac.row(i) = ((psi(plus) - psi(minus)) / (2.0 * h)).transpose();
  }
  return jac;
}

// Second-order central stencil; one symmetrized d x d matrix per output.
inline std::vector<Eigen::MatrixXd> hessian_fd(const StatisticFn& psi, const Eigen::VectorXd& x, double h) {
  detail::require(h > 0.0, ErrorKind::kParameter, "hessian_fd: step must be positive");
  const auto d = static_cast<Eigen::Index>(psi.in_dim);
  const auto out = static_cast<Eigen::Index>(psi.out_dim);
  std::vector<Eigen::MatrixXd> hess(psi.out_dim, Eigen::MatrixXd::Zero(d, d));
  const Eigen::VectorXd center = psi(x);
  auto shifted = [&](Eigen::Index i, double si, Eigen::Index k, double sk) {
    Eigen::VectorXd p = x;
    p(i) += si * h;
    p(k) += sk * h;
    return psi(p);
  };
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::VectorXd diag = (shifted(i, 1.0, i, 0.0) - 2.0 * center + shifted(i, -1.0, i, 0.0)) / (h * h);
    for (Eigen::Index j = 0; j < out; ++j) hess[static_cast<std::size_t>(j)](i, i) = diag(j);
    for (Eigen::Index k = i + 1; k < d; ++k) {
      const Eigen::VectorXd mixed =
          (shifted(i, 1.0, k, 1.0) - shifted(i, 1.0, k, -1.0) - shifted(i, -1.0, k, 1.0) + shifted(i, -1.0, k, -1.0)) /
          (4.0 * h * h);
      for (Eigen::Index j = 0; j < out; ++j) {
        hess[static_cast<std::size_t>(j)](i, k) = mixed(j);
        hess[static_cast<std::size_t>(j)](k, i) = mixed(j);
      }
    }
  }
  return hess;
}

struct SpectralConstants {
  double a = 0.0;  // tr(J^T J)
  double b = 0.0;  // sum_j tr(H_j) + tr(H_j H_j)
  double hessian_trace = 0.0;      // sum_j tr(H_j)
  double hessian_frobenius = 0.0;  // sum_j tr(H_j H_j), never negative
  // Max |J(h) - J(h/2)|: a Richardson-style consistency check on the step.
  double jacobian_step_gap = 0.0;
};

inline SpectralConstants constants_ab(const StatisticFn& psi, const Eigen::VectorXd& x, double h) {
  const Eigen::MatrixXd jac = jacobian_fd(psi, x, h);
  const Eigen::MatrixXd jac_half = jacobian_fd(psi, x, h / 2.0);
  SpectralConstants c;
  c.a = (jac.transpose() * jac).trace();
  for (const auto& hj : hessian_fd(psi, x, h)) {
    c.hessian_trace += hj.trace();
    c.hessian_frobenius += (hj * hj).trace();
  }
  c.b = c.hessian_trace + c.hessian_frobenius;
  c.jacobian_step_gap = (jac - jac_half).cwiseAbs().maxCoeff();
  return c;
}

inline SpectralConstants constants_ab(const StatisticFn& psi, const Eigen::VectorXd& x) {
  return constants_ab(psi, x, default_fd_step(x));
}

// r = (sigma / delta) (sqrt(a) + sigma sqrt(b / 2)); a negative b (possible
// when the Hessian traces are negative) contributes nothing.
inline double concentration_radius(const SpectralConstants& c, double sigma, double delta) {
  return sigma / delta * (std::sqrt(std::max(c.a, 0.0)) + sigma * std::sqrt(std::max(c.b, 0.0) / 2.0));
}

struct BoundReport {
  std::string statistic;
  double sigma = 0.0;
  double delta = 0.0;
  double a = 0.0;
  double b = 0.0;
  double radius = 0.0;
  std::size_t n_samples = 0;
  std::size_t violations = 0;
  double violation_rate = 0.0;
  // delta + 3 sqrt(delta (1 - delta) / n): the pass threshold.
  double threshold = 0.0;
  bool pass = false;

  std::string to_text() const {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "statistic=%s sigma=%.17g delta=%.17g a=%.17g b=%.17g radius=%.17g n_samples=%zu "
                  "violations=%zu violation_rate=%.17g threshold=%.17g result=%s",
                  statistic.c_str(), sigma, delta, a, b, radius, n_samples, violations, violation_rate, threshold,
                  pass ? "pass" : "fail");
    return buf;
  }
};

// Draws are split into fixed-size chunks, each with its own substream, so the
// result does not depend on how many threads run them.
inline constexpr std::size_t kBoundChunk = 1024;

inline BoundReport verify_bound(const StatisticFn& psi, const Eigen::VectorXd& x, double sigma, double delta,
                                std::size_t n_samples, const Rng& rng, unsigned threads = 0) {
  detail::require(delta > 0.0 && delta < 1.0, ErrorKind::kParameter, "verify_bound: delta must lie in (0, 1)");
  detail::require(sigma > 0.0 && std::isfinite(sigma), ErrorKind::kParameter, "verify_bound: sigma must be positive");
  detail::require(n_samples >= 1, ErrorKind::kParameter, "verify_bound: n_samples must be >= 1");
  detail::require(psi.sigma_max.has_value(), ErrorKind::kParameter,
                  "verify_bound: statistic '" + psi.name + "' has no sigma_max certificate");
  detail::require(sigma <= *psi.sigma_max, ErrorKind::kParameter,
                  "verify_bound: sigma " + std::to_string(sigma) + " exceeds certified " +
                      std::to_string(*psi.sigma_max));

  const SpectralConstants c = constants_ab(psi, x);
  BoundReport report;
  report.statistic = psi.name;
  report.sigma = sigma;
  report.delta = delta;
  report.a = c.a;
  report.b = c.b;
  report.radius = concentration_radius(c, sigma, delta);
  report.n_samples = n_samples;

  const Eigen::VectorXd base = psi(x);
  const std::size_t chunks = (n_samples + kBoundChunk - 1) / kBoundChunk;
  std::vector<std::size_t> counts(chunks, 0);
  auto run_chunk = [&](std::size_t chunk) {
    Rng local = rng.derive(chunk);
    const std::size_t begin = chunk * kBoundChunk;
    const std::size_t end = std::min(n_samples, begin + kBoundChunk);
    std::vector<double> eps(psi.in_dim);
    std::size_t hits = 0;
    for (std::size_t s = begin; s < end; ++s) {
      local.fill_normal(eps);
      Eigen::VectorXd p = x;
      for (std::size_t i = 0; i < psi.in_dim; ++i) p(static_cast<Eigen::Index>(i)) += sigma * eps[i];
      if ((psi(p) - base).norm() >= report.radius) ++hits;
    }
    counts[chunk] = hits;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (!psi.reentrant || threads == 1 || chunks == 1) {
    for (std::size_t ch = 0; ch < chunks; ++ch) run_chunk(ch);
  } else {
    const std::size_t workers = std::min<std::size_t>(threads, chunks);
    std::vector<std::exception_ptr> failures(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t ch = w; ch < chunks; ch += workers) run_chunk(ch);
          } catch (...) {
            failures[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  for (std::size_t v : counts) report.violations += v;
  report.violation_rate = static_cast<double>(report.violations) / static_cast<double>(n_samples);
  report.threshold = delta + 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(n_samples));
  report.pass = report.violation_rate < report.threshold;
  return report;
}

}  // namespace waveaug

#endif  // WAVEAUG_THEORY_HPP_
