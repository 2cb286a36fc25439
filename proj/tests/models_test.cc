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

#include "dpkit/models.h"

#include <cmath>

#include "dpkit/errors.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"

namespace dpkit {
namespace {

using ::dpkit::testing::ConstrainedRidge;
using ::dpkit::testing::MakeSlantedClasses;
using ::dpkit::testing::NewtonClassifierFit;
using ::dpkit::testing::OracleLoss;

constexpr double kHugeEpsilon = 1e9;

TrainingData ToyData() {
  const auto toy = MakeSlantedClasses(60, 31);
  TrainingData d;
  d.X = toy.X;
  d.y = toy.y;
  d.bounds = {{-1, 1}, {-1, 1}};
  return d;
}

ModelSpec Spec(ModelKind kind, double eps, double gamma, bool bias) {
  ModelSpec s;
  s.kind = kind;
  s.budget = PrivacyBudget::Pure(eps);
  s.gamma = gamma;
  s.add_bias = bias;
  return s;
}

// Scaled design built by hand: bias column of ones, columns divided by their
// bound magnitude (1 here), everything divided by √p'.
Eigen::MatrixXd HandScaled(const Eigen::MatrixXd& X, bool bias) {
  Eigen::MatrixXd Z(X.rows(), X.cols() + (bias ? 1 : 0));
  if (bias) Z.col(0).setOnes();
  Z.rightCols(X.cols()) = X;
  return Z / std::sqrt(static_cast<double>(Z.cols()));
}

TEST(ModelKindTest, NamesRoundTrip) {
  for (ModelKind k : {ModelKind::kLogistic, ModelKind::kSvmLinear,
                      ModelKind::kSvmGaussian, ModelKind::kLinear}) {
    EXPECT_EQ(ModelKindFromString(ToString(k)), k);
  }
  EXPECT_THROW(ModelKindFromString("forest"), InvalidArgumentError);
}

TEST(FitModelTest, LogisticMatchesOracleAtHugeEpsilon) {
  const TrainingData d = ToyData();
  for (bool bias : {false, true}) {
    RandomSource rng(1);
    const TrainedModel m =
        FitModel(Spec(ModelKind::kLogistic, kHugeEpsilon, 0.1, bias), d, rng);
    const Eigen::MatrixXd Z = HandScaled(d.X, bias);
    const Eigen::VectorXd oracle = NewtonClassifierFit(
        Z, 2 * d.y.array() - 1, OracleLoss::kLogistic, 0, 0.1);
    EXPECT_NEAR((m.scaled_coefficients - oracle).norm(), 0.0, 1e-5);
    // Raw coefficients give the same scores on raw features.
    const Eigen::MatrixXd raw = bias ? AddBiasColumn(d.X) : d.X;
    EXPECT_NEAR((raw * m.coefficients - Z * oracle).norm(), 0.0, 1e-5);
  }
}

TEST(FitModelTest, LinearSvmMatchesOracleAtHugeEpsilon) {
  const TrainingData d = ToyData();
  RandomSource rng(2);
  ModelSpec spec = Spec(ModelKind::kSvmLinear, kHugeEpsilon, 0.3, true);
  spec.perturbation = Perturbation::kOutput;
  const TrainedModel m = FitModel(spec, d, rng);
  const Eigen::VectorXd oracle = NewtonClassifierFit(
      HandScaled(d.X, true), 2 * d.y.array() - 1, OracleLoss::kHuber, 0.5, 0.3);
  EXPECT_NEAR((m.scaled_coefficients - oracle).norm(), 0.0, 1e-5);
}

TEST(FitModelTest, PredictionsUseThresholds) {
  const TrainingData d = ToyData();
  RandomSource rng(3);
  const TrainedModel logit =
      FitModel(Spec(ModelKind::kLogistic, kHugeEpsilon, 0.1, false), d, rng);
  const Eigen::VectorXd probs = Predict(logit, d.X, true);
  const Eigen::VectorXd labels = Predict(logit, d.X);
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    ASSERT_GT(probs(i), 0.0);
    ASSERT_LT(probs(i), 1.0);
    ASSERT_EQ(labels(i), probs(i) >= 0.5 ? 1.0 : 0.0);
  }
  // Separable enough that the non-private fit is mostly right.
  EXPECT_LT((labels - d.y).cwiseAbs().sum() / d.y.size(), 0.15);
  EXPECT_EQ(ClassifyRaw(ModelKind::kSvmLinear, 0.0), 1.0);
  EXPECT_EQ(ClassifyRaw(ModelKind::kSvmLinear, -1e-12), 0.0);
  EXPECT_EQ(ClassifyRaw(ModelKind::kLogistic, 0.5), 1.0);
}

TEST(FitModelTest, LinearRegressionMatchesConstrainedRidge) {
  RandomSource data_rng(4);
  TrainingData d;
  d.X.resize(150, 2);
  d.y.resize(150);
  for (int i = 0; i < 150; ++i) {
    d.X(i, 0) = 4 * data_rng.Uniform() - 2;
    d.X(i, 1) = data_rng.Uniform();
    d.y(i) = std::clamp(1 + 0.5 * d.X(i, 0) - d.X(i, 1) +
                            0.1 * data_rng.StandardNormal(),
                        -1.0, 3.0);
  }
  d.bounds = {{-2, 2}, {0, 1}};
  d.y_bounds = Bounds{-1, 3};
  RandomSource rng(5);
  const double gamma = 0.2;
  const TrainedModel m =
      FitModel(Spec(ModelKind::kLinear, kHugeEpsilon, gamma, true), d, rng);
  // Hand-built scaled problem: p' = 3, shift 1, y scale 2/3.
  Eigen::MatrixXd Z(150, 3);
  Z.col(0).setOnes();
  Z.col(1) = d.X.col(0) / 2;
  Z.col(2) = d.X.col(1);
  const Eigen::VectorXd ys = (d.y.array() - 1.0) / (2.0 / 3.0);
  const Eigen::VectorXd oracle = ConstrainedRidge(Z, ys, gamma, std::sqrt(3.0));
  EXPECT_NEAR((m.scaled_coefficients - oracle).norm(), 0.0, 1e-5);
  EXPECT_DOUBLE_EQ(m.y_shift, 1.0);
  EXPECT_DOUBLE_EQ(m.y_scale, 2.0 / 3.0);
  const Eigen::VectorXd expected = (Z * oracle).array() * (2.0 / 3.0) + 1.0;
  EXPECT_NEAR((Predict(m, d.X) - expected).norm(), 0.0, 1e-4);
  // The intercept absorbs the midrange shift.
  EXPECT_NEAR(m.coefficients(0), oracle(0) * 2.0 / 3.0 + 1.0, 1e-5);
}

TEST(FitModelTest, GaussianSvmIgnoresBoundsWithWarning) {
  TrainingData d = ToyData();
  ModelSpec spec = Spec(ModelKind::kSvmGaussian, 1.0, 0.5, false);
  spec.rff_dim = 30;
  RandomSource rng(6);
  const TrainedModel with_bounds = FitModel(spec, d, rng);
  EXPECT_EQ(with_bounds.warnings.size(), 1u);
  EXPECT_EQ(with_bounds.coefficients.size(), 30);
  ASSERT_TRUE(with_bounds.rff.has_value());
  EXPECT_DOUBLE_EQ(with_bounds.rff->beta(), 0.5);
  d.bounds.clear();
  d.X(0, 0) = 50;  // No bounds contract without bounds.
  RandomSource rng2(6);
  const TrainedModel without = FitModel(spec, d, rng2);
  EXPECT_TRUE(without.warnings.empty());
  EXPECT_EQ(Predict(without, d.X).size(), d.X.rows());
}

TEST(FitModelTest, RejectsBadData) {
  TrainingData d = ToyData();
  RandomSource rng(7);
  const ModelSpec logit = Spec(ModelKind::kLogistic, 1, 1, false);
  TrainingData bad_label = d;
  bad_label.y(3) = 2;
  EXPECT_THROW(FitModel(logit, bad_label, rng), DataError);
  TrainingData out_of_bounds = d;
  out_of_bounds.X(0, 1) = 1.5;
  EXPECT_THROW(FitModel(logit, out_of_bounds, rng), DataError);
  TrainingData weighted = d;
  weighted.weights = Eigen::VectorXd::Ones(d.X.rows());
  EXPECT_THROW(FitModel(logit, weighted, rng), InvalidArgumentError);
  ModelSpec svm = Spec(ModelKind::kSvmLinear, 1, 1, false);
  EXPECT_THROW(FitModel(svm, weighted, rng), InvalidArgumentError);
  svm.perturbation = Perturbation::kOutput;
  svm.weight_upper_bound = 1.0;
  EXPECT_NO_THROW(FitModel(svm, weighted, rng));
  ModelSpec approx = logit;
  approx.budget = PrivacyBudget::Approximate(0.5, 0.01);
  EXPECT_THROW(FitModel(approx, d, rng), InvalidArgumentError);
  const ModelSpec linear = Spec(ModelKind::kLinear, 1, 1, false);
  EXPECT_THROW(FitModel(linear, d, rng), InvalidArgumentError);
}

TEST(PredictTest, RejectsWrongColumnCount) {
  RandomSource rng(8);
  const TrainedModel m =
      FitModel(Spec(ModelKind::kLogistic, 1, 1, false), ToyData(), rng);
  EXPECT_THROW(Predict(m, Eigen::MatrixXd::Zero(3, 3)), DataError);
}

}  // namespace
}  // namespace dpkit
