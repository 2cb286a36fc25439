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

#ifndef DPKIT_MODELS_H_
#define DPKIT_MODELS_H_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dpkit/bounds.h"
#include "dpkit/erm.h"
#include "dpkit/mechanisms.h"
#include "dpkit/random.h"
#include "dpkit/rff.h"
#include "dpkit/scaling.h"

namespace dpkit {

enum class ModelKind { kLogistic, kSvmLinear, kSvmGaussian, kLinear };

std::string ToString(ModelKind kind);
// Inverse of ToString; throws InvalidArgumentError on unknown names.
ModelKind ModelKindFromString(const std::string& name);

inline bool IsClassifier(ModelKind kind) { return kind != ModelKind::kLinear; }

// Everything needed to train one model except the data.
struct ModelSpec {
  ModelKind kind = ModelKind::kLogistic;
  // Pure for classifiers; linear regression also accepts delta > 0.
  PrivacyBudget budget = PrivacyBudget::Pure(1.0);
  double gamma = 1.0;
  // Classifiers only.
  Perturbation perturbation = Perturbation::kObjective;
  // SVMs only.
  double huber_h = 0.5;
  // Gaussian-kernel SVM: number of random features D and kernel β
  // (default 1/p).
  Eigen::Index rff_dim = 0;
  std::optional<double> kernel_param;
  // Required when training weights are given (SVMs only).
  std::optional<double> weight_upper_bound;
  bool add_bias = false;

  void Validate() const;
};

struct TrainingData {
  Eigen::MatrixXd X;
  // Classification labels in {0, 1}, or regression responses.
  Eigen::VectorXd y;
  // One per column of X. Not needed by the Gaussian-kernel SVM.
  std::vector<Bounds> bounds;
  // Linear regression only.
  std::optional<Bounds> y_bounds;
  std::optional<Eigen::VectorXd> weights;
};

struct TrainedModel {
  ModelKind kind = ModelKind::kLogistic;
  ModelSpec spec;
  // Coefficients for the raw features (bias first when add_bias); for the
  // Gaussian-kernel SVM, one per random feature.
  Eigen::VectorXd coefficients;
  // The minimizer's output in the scaled space the privacy analysis uses.
  Eigen::VectorXd scaled_coefficients;
  std::optional<FeatureScaler> scaler;
  std::optional<RffProjection> rff;
  // Linear regression: y was fitted as (y - y_shift) / y_scale.
  double y_shift = 0.0;
  double y_scale = 1.0;
  Eigen::Index num_features = 0;
  std::vector<std::string> feature_names;
  bool converged = true;
  // Non-fatal notes from fitting, e.g. ignored bounds. Not serialized.
  std::vector<std::string> warnings;
};

// Trains one private model. Bounds are contracts: feature values (and y for
// regression) outside their bounds by more than 1e-9 raise DataError.
TrainedModel FitModel(const ModelSpec& spec, const TrainingData& data,
                      RandomSource& rng);

// Classifiers: probabilities σ(xθ) (logistic) or margins (SVM) when `raw`,
// otherwise labels in {0, 1} with σ ≥ 0.5 and margin ≥ 0 mapping to 1.
// Linear regression: predictions xθ regardless of `raw`.
Eigen::VectorXd Predict(const TrainedModel& model, const Eigen::MatrixXd& X,
                        bool raw = false);

// Label 1 for predictions at or above the decision threshold.
double ClassifyRaw(ModelKind kind, double raw);

}  // namespace dpkit

#endif  // DPKIT_MODELS_H_
