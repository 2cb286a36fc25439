//
// Copyright 2026 The dpkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpkit/scaling.h"

#include <cmath>

#include "dpkit/errors.h"
#include "dpkit/random.h"
#include "gtest/gtest.h"

namespace dpkit {
namespace {

const std::vector<Bounds> kBounds = {{-2, 1}, {0, 5}, {-0.5, 0.5}};

Eigen::MatrixXd RandomWithin(const std::vector<Bounds>& bounds, int n,
                             uint64_t seed) {
  RandomSource rng(seed);
  Eigen::MatrixXd X(n, bounds.size());
  for (int i = 0; i < n; ++i) {
    for (size_t j = 0; j < bounds.size(); ++j) {
      // Include the corners, where norms peak.
      const double u = i % 4 == 0 ? 1.0 : rng.Uniform();
      X(i, j) = bounds[j].lower + u * bounds[j].Width();
      if (i % 4 == 1) X(i, j) = bounds[j].lower;
    }
  }
  return X;
}

TEST(FeatureScalerTest, ClassificationRowsInUnitBall) {
  for (bool bias : {false, true}) {
    const FeatureScaler s = FeatureScaler::ForClassification(kBounds, bias);
    const Eigen::MatrixXd Z = s.Transform(RandomWithin(kBounds, 200, 1));
    EXPECT_EQ(Z.cols(), bias ? 4 : 3);
    for (int i = 0; i < Z.rows(); ++i) {
      ASSERT_LE(Z.row(i).norm(), 1.0 + 1e-12);
    }
    EXPECT_DOUBLE_EQ(s.global_divisor(), std::sqrt(bias ? 4.0 : 3.0));
  }
}

TEST(FeatureScalerTest, RegressionRowsInRootPBall) {
  const FeatureScaler s = FeatureScaler::ForRegression(kBounds, true);
  EXPECT_EQ(s.global_divisor(), 1.0);
  EXPECT_EQ(s.column_divisors(), (std::vector<double>{1, 2, 5, 0.5}));
  const Eigen::MatrixXd Z = s.Transform(RandomWithin(kBounds, 200, 2));
  EXPECT_EQ(Z.col(0), Eigen::VectorXd::Ones(200));
  for (int i = 0; i < Z.rows(); ++i) {
    ASSERT_LE(Z.row(i).norm(), 2.0 + 1e-12);
    ASSERT_LE(Z.row(i).cwiseAbs().maxCoeff(), 1.0 + 1e-12);
  }
}

TEST(FeatureScalerTest, CoefficientRoundTripPreservesPredictions) {
  const FeatureScaler s = FeatureScaler::ForClassification(kBounds, true);
  Eigen::VectorXd theta(4);
  theta << 0.3, -1.2, 0.7, 2.5;
  EXPECT_NEAR((s.ScaleCoefficients(s.UnscaleCoefficients(theta)) - theta)
                  .norm(),
              0.0, 1e-12);
  // Scaled features with θ give the same scores as raw features with the
  // unscaled coefficients.
  const Eigen::MatrixXd X = RandomWithin(kBounds, 20, 3);
  const Eigen::VectorXd scaled_scores = s.Transform(X) * theta;
  const Eigen::VectorXd raw_scores =
      AddBiasColumn(X) * s.UnscaleCoefficients(theta);
  EXPECT_NEAR((scaled_scores - raw_scores).norm(), 0.0, 1e-12);
}

TEST(FeatureScalerTest, RejectsBadInputs) {
  EXPECT_THROW(FeatureScaler::ForClassification({{1, 1}}, false),
               InvalidArgumentError);
  // Bounds of [0, 0]-like degenerate magnitude are rejected by Validate;
  // wrong column counts are a data problem.
  const FeatureScaler s = FeatureScaler::ForClassification(kBounds, false);
  EXPECT_THROW(s.Transform(Eigen::MatrixXd::Zero(2, 2)), DataError);
}

TEST(CheckWithinBoundsTest, ClampsTinyExcursionsAndRejectsLargeOnes) {
  Eigen::MatrixXd X(2, 1);
  X << 1 + 1e-12, 0.5;
  const Eigen::MatrixXd clamped = CheckWithinBounds(X, {{0, 1}});
  EXPECT_EQ(clamped(0, 0), 1.0);
  X(1, 0) = 1.1;
  EXPECT_THROW(CheckWithinBounds(X, {{0, 1}}), DataError);
  X(1, 0) = NAN;
  EXPECT_THROW(CheckWithinBounds(X, {{0, 1}}), DataError);
}

}  // namespace
}  // namespace dpkit
