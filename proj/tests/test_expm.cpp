// Copyright 2026 The qchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "qchan/core/expm.hpp"
#include "qchan/core/random.hpp"

using namespace qchan;

namespace {

CMatrix random_matrix(Rng& rng, Eigen::Index n, double target_norm) {
  std::normal_distribution<double> n01;
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(n01(rng), n01(rng));
  return m * (target_norm / m.cwiseAbs().colwise().sum().maxCoeff());
}

}  // namespace

TEST(Expm, ZeroGivesIdentity) {
  EXPECT_EQ(expm(CMatrix::Zero(5, 5)), CMatrix::Identity(5, 5));
}

TEST(Expm, AgreesWithPadeOracle) {
  Rng rng(7);
  for (double norm : {0.01, 0.5, 1.0, 3.0, 10.0}) {
    for (Eigen::Index n : {2, 5, 16}) {
      const CMatrix a = random_matrix(rng, n, norm);
      const CMatrix oracle = a.exp();
      EXPECT_LT(max_abs_diff(expm(a), oracle) / oracle.cwiseAbs().maxCoeff(), 1e-12) << "norm " << norm << " n " << n;
    }
  }
}

TEST(Expm, SkewHermitianGivesUnitary) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix a = random_matrix(rng, 12, 8.0);
    a = (a - a.adjoint()).eval();
    const CMatrix u = expm(a);
    EXPECT_LT(max_abs_diff(u.adjoint() * u, CMatrix::Identity(12, 12)), 1e-12);
  }
}

TEST(Expm, FrechetMatchesFullBlockExponential) {
  Rng rng(9);
  for (double norm : {0.3, 2.0, 9.0}) {
    const Eigen::Index n = 6;
    const CMatrix a = random_matrix(rng, n, norm);
    const CMatrix e = random_matrix(rng, n, 1.0);
    CMatrix big = CMatrix::Zero(2 * n, 2 * n);
    big.topLeftCorner(n, n) = a;
    big.bottomRightCorner(n, n) = a;
    big.topRightCorner(n, n) = e;
    const CMatrix oracle = big.exp();
    const auto [ea, l] = expm_frechet(a, e);
    const double scale = oracle.cwiseAbs().maxCoeff();
    EXPECT_LT(max_abs_diff(ea, oracle.topLeftCorner(n, n)) / scale, 1e-12);
    EXPECT_LT(max_abs_diff(l, oracle.topRightCorner(n, n)) / scale, 1e-12);
  }
}

TEST(Expm, FrechetMatchesCentralDifferences) {
  Rng rng(10);
  const CMatrix a = random_matrix(rng, 5, 2.0);
  const CMatrix e = random_matrix(rng, 5, 1.0);
  const double h = 1e-5;
  const CMatrix fd = (expm(a + h * e) - expm(a - h * e)) / (2 * h);
  const CMatrix l = expm_frechet(a, e).second;
  EXPECT_LT(max_abs_diff(fd, l) / l.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Expm, AdjointIdentity) {
  Rng rng(12);
  const CMatrix a = random_matrix(rng, 7, 3.0);
  const CMatrix e = random_matrix(rng, 7, 1.0);
  const CMatrix g = random_matrix(rng, 7, 1.0);
  const double lhs = (g.adjoint() * expm_frechet(a, e).second).trace().real();
  const double rhs = (expm_frechet_adjoint(a, g).adjoint() * e).trace().real();
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs) + 1e-13);
}

TEST(Expm, NonFiniteInputThrows) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(expm(a), NumericalError);
}
