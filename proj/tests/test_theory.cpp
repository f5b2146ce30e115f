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
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "waveaug/error.hpp"
#include "waveaug/theory.hpp"

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

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = nd(gen);
  }
  return m;
}

StatisticFn square_and_product() {
  return {2, 2,
          [](const Eigen::VectorXd& x) {
            Eigen::VectorXd y(2);
            y << x(0) * x(0), x(0) * x(1);
            return y;
          },
          std::nullopt, true, "square_and_product"};
}

TEST(Jacobian, Identity) {
  const Eigen::MatrixXd j = jacobian_fd(identity_statistic(3), Eigen::Vector3d(0.3, -1.0, 2.0), 1e-4);
  EXPECT_LT((j - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Jacobian, LinearIsTransposedWeights) {
  const Eigen::MatrixXd w = random_matrix(2, 3, 1);
  const Eigen::MatrixXd j = jacobian_fd(linear_statistic(w), Eigen::Vector3d(1.0, 2.0, 3.0), 1e-4);
  EXPECT_LT((j - w.transpose()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Jacobian, HandDifferentiated) {
  const Eigen::MatrixXd j = jacobian_fd(square_and_product(), Eigen::Vector2d(1.0, 2.0), 1e-4);
  Eigen::MatrixXd want(2, 2);
  want << 2.0, 2.0, 0.0, 1.0;
  EXPECT_LT((j - want).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Jacobian, ConvergesWithStep) {
  const StatisticFn cubic{1, 1, [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, std::sin(x(0))); },
                          std::nullopt, true, "sin"};
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.7);
  const double exact = std::cos(0.7);
  double prev = std::abs(jacobian_fd(cubic, x, 0.1)(0, 0) - exact);
  for (double h = 0.05; h > 1e-3; h /= 2.0) {
    const double err = std::abs(jacobian_fd(cubic, x, h)(0, 0) - exact);
    EXPECT_LT(err, prev / 3.0) << h;
    prev = err;
  }
}

TEST(Hessian, LinearIsZero) {
  for (const auto& h : hessian_fd(linear_statistic(random_matrix(3, 4, 2)), Eigen::Vector4d(1, -1, 2, 0.5), 1e-4)) {
    EXPECT_LT(h.cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Hessian, QuadraticFormsAndSymmetry) {
  std::vector<Eigen::MatrixXd> forms{random_matrix(3, 3, 3), random_matrix(3, 3, 4)};
  const auto hs = hessian_fd(quadratic_statistic(forms), Eigen::Vector3d(0.5, -0.2, 1.5), 1e-3);
  for (std::size_t j = 0; j < forms.size(); ++j) {
    const Eigen::MatrixXd want = forms[j] + forms[j].transpose();
    EXPECT_LT((hs[j] - want).cwiseAbs().maxCoeff(), 1e-5);
    EXPECT_EQ(hs[j], hs[j].transpose());
  }
}

TEST(Constants, Identity) {
  const auto c = constants_ab(identity_statistic(3), Eigen::Vector3d(1, 2, 3));
  EXPECT_NEAR(c.a, 3.0, 1e-6);
  EXPECT_NEAR(c.b, 0.0, 1e-6);
}

TEST(Constants, LinearMatchesAnalytic) {
  const Eigen::MatrixXd w = random_matrix(4, 3, 5);
  const auto c = constants_ab(linear_statistic(w), Eigen::Vector3d(0.1, -0.4, 2.0));
  const double a = (w.transpose() * w).trace();
  EXPECT_NEAR(c.a, a, 1e-5 * a);
  EXPECT_NEAR(c.b, 0.0, 1e-6);
}

TEST(Constants, DiagonalQuadratic) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  const auto c = constants_ab(quadratic_statistic({a}), Eigen::Vector2d(1.0, 1.0));
  EXPECT_NEAR(c.a, 20.0, 20.0 * 1e-5);
  EXPECT_NEAR(c.b, 26.0, 26.0 * 1e-5);
  EXPECT_GE(c.hessian_frobenius, 0.0);
}

TEST(Constants, GeneralQuadraticMatchesAnalytic) {
  std::vector<Eigen::MatrixXd> forms{random_matrix(3, 3, 6), random_matrix(3, 3, 7), random_matrix(3, 3, 8)};
  const Eigen::Vector3d x(0.3, 1.1, -0.6);
  double a = 0.0, b = 0.0;
  for (const auto& f : forms) {
    const Eigen::MatrixXd s = f + f.transpose();
    const Eigen::VectorXd g = s * x;
    a += g.squaredNorm();
    b += s.trace() + (s * s).trace();
  }
  const auto c = constants_ab(quadratic_statistic(forms), x);
  EXPECT_NEAR(c.a, a, 1e-5 * std::abs(a));
  EXPECT_NEAR(c.b, b, 1e-5 * std::abs(b));
}

TEST(Constants, OrthogonalInvariance) {
  std::vector<Eigen::MatrixXd> forms{random_matrix(3, 3, 9), random_matrix(3, 3, 10)};
  const StatisticFn psi = quadratic_statistic(forms);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(2, 2, 11)).householderQ();
  const StatisticFn rotated{3, 2, [psi, q](const Eigen::VectorXd& x) -> Eigen::VectorXd { return q * psi(x); },
                            std::nullopt, true, "rotated"};
  const Eigen::Vector3d x(0.2, -0.7, 1.3);
  EXPECT_NEAR(constants_ab(rotated, x).a, constants_ab(psi, x).a, 1e-6);
}

TEST(Radius, Formula) {
  SpectralConstants c;
  c.a = 16.0;
  EXPECT_NEAR(concentration_radius(c, 0.1, 0.3), 0.1 / 0.3 * 4.0, 1e-15);
  c.a = 20.0;
  c.b = 26.0;
  EXPECT_NEAR(concentration_radius(c, 0.05, 0.1), 0.5 * (std::sqrt(20.0) + 0.05 * std::sqrt(13.0)), 1e-14);
}

TEST(VerifyBound, IdentityHighDimension) {
  const auto r = verify_bound(identity_statistic(16), Eigen::VectorXd::Zero(16), 0.1, 0.3, 10000, Rng(1));
  EXPECT_NEAR(r.radius, 0.1 / 0.3 * 4.0, 1e-6);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.violation_rate, 0.01);
}

TEST(VerifyBound, LinearTranslationInvariant) {
  const StatisticFn psi = linear_statistic(random_matrix(3, 4, 12));
  const auto r1 = verify_bound(psi, Eigen::Vector4d(0, 0, 0, 0), 0.1, 0.1, 10000, Rng(3));
  const auto r2 = verify_bound(psi, Eigen::Vector4d(5, -2, 1, 9), 0.1, 0.1, 10000, Rng(4));
  const double p = 0.5 * (r1.violation_rate + r2.violation_rate);
  const double se = std::sqrt(std::max(p * (1 - p), 1e-4) * 2.0 / 10000);
  EXPECT_NEAR(r1.violation_rate, r2.violation_rate, 3.0 * se);
}

TEST(VerifyBound, QuadraticSigmaSweep) {
  std::vector<Eigen::MatrixXd> forms{random_matrix(3, 3, 13), random_matrix(3, 3, 14)};
  const StatisticFn psi = quadratic_statistic(forms);
  const Eigen::Vector3d x(1.0, 1.0, 1.0);
  const auto lo = verify_bound(psi, x, 0.01, 0.3, 10000, Rng(5));
  const auto hi = verify_bound(psi, x, 0.05, 0.3, 10000, Rng(5));
  EXPECT_TRUE(lo.pass);
  EXPECT_TRUE(hi.pass);
  const double se = std::sqrt(std::max(hi.violation_rate * (1 - hi.violation_rate), 1e-4) / 10000);
  EXPECT_GE(hi.violation_rate, lo.violation_rate - 3.0 * se);
}

TEST(VerifyBound, ThreadCountDoesNotChangeResult) {
  const StatisticFn psi = quadratic_statistic({random_matrix(3, 3, 15)});
  const Eigen::Vector3d x(0.5, 0.5, 0.5);
  const auto serial = verify_bound(psi, x, 0.1, 0.1, 5000, Rng(6), 1);
  const auto threaded = verify_bound(psi, x, 0.1, 0.1, 5000, Rng(6), 4);
  EXPECT_EQ(serial.violations, threaded.violations);
  EXPECT_EQ(serial.to_text(), threaded.to_text());
}

TEST(VerifyBound, Preconditions) {
  const auto psi = identity_statistic(2);
  const Eigen::Vector2d x(0, 0);
  EXPECT_EQ(kind_of([&] { verify_bound(psi, x, 0.1, 0.0, 100, Rng(1)); }), ErrorKind::kParameter);
  EXPECT_EQ(kind_of([&] { verify_bound(psi, x, 0.1, 1.0, 100, Rng(1)); }), ErrorKind::kParameter);
  EXPECT_EQ(kind_of([&] { verify_bound(psi, x, -0.1, 0.3, 100, Rng(1)); }), ErrorKind::kParameter);
  EXPECT_EQ(kind_of([&] { verify_bound(square_and_product(), x, 0.1, 0.3, 100, Rng(1)); }), ErrorKind::kParameter);
  StatisticFn certified = square_and_product();
  certified.sigma_max = 0.05;
  EXPECT_EQ(kind_of([&] { verify_bound(certified, x, 0.1, 0.3, 100, Rng(1)); }), ErrorKind::kParameter);
  EXPECT_TRUE(verify_bound(certified, Eigen::Vector2d(1, 1), 0.05, 0.3, 2000, Rng(1)).pass);
}

TEST(Statistic, EvaluationErrors) {
  const StatisticFn bad{1, 1, [](const Eigen::VectorXd&) { return Eigen::VectorXd::Constant(1, NAN); },
                        std::nullopt, true, "bad"};
  EXPECT_EQ(kind_of([&] { jacobian_fd(bad, Eigen::VectorXd::Zero(1), 1e-3); }), ErrorKind::kEvaluation);
  EXPECT_EQ(kind_of([] { identity_statistic(2)(Eigen::VectorXd::Zero(3)); }), ErrorKind::kShape);
}

}  // namespace
}  // namespace waveaug
