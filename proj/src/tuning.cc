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

#include "dpkit/tuning.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dpkit/errors.h"
#include "dpkit/mechanisms.h"

namespace dpkit {
namespace {

TrainingData Subset(const TrainingData& data, const std::vector<size_t>& rows) {
  TrainingData out;
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  out.X.resize(n, data.X.cols());
  out.y.resize(n);
  if (data.weights) out.weights = Eigen::VectorXd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = static_cast<Eigen::Index>(rows[i]);
    out.X.row(i) = data.X.row(r);
    out.y(i) = data.y(r);
    if (data.weights) (*out.weights)(i) = (*data.weights)(r);
  }
  out.bounds = data.bounds;
  out.y_bounds = data.y_bounds;
  return out;
}

double Utility(const TrainedModel& model, const TrainingData& validation) {
  if (IsClassifier(model.kind)) {
    const Eigen::VectorXd labels = Predict(model, validation.X);
    double errors = 0.0;
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
      if (labels(i) != validation.y(i)) errors += 1.0;
    }
    return -errors;
  }
  const Bounds& yb = *validation.y_bounds;
  const Eigen::VectorXd pred =
      Predict(model, validation.X).cwiseMax(yb.lower).cwiseMin(yb.upper);
  return -(pred - validation.y).squaredNorm();
}

}  // namespace

std::vector<std::vector<size_t>> SplitFolds(size_t n, size_t m,
                                            RandomSource& rng) {
  if (m == 0) throw InvalidArgumentError("need at least one candidate");
  if (n < m + 1) {
    std::ostringstream msg;
    msg << n << " rows cannot be split into " << m + 1 << " folds";
    throw DataError(msg.str());
  }
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  for (size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.UniformIndex(i)]);
  }
  const size_t folds = m + 1;
  std::vector<std::vector<size_t>> out(folds);
  size_t start = 0;
  for (size_t k = 0; k < folds; ++k) {
    const size_t size = n / folds + (k < n % folds ? 1 : 0);
    out[k].assign(perm.begin() + start, perm.begin() + start + size);
    start += size;
  }
  return out;
}

double SquaredErrorSensitivity(const Bounds& y_bounds) {
  y_bounds.Validate();
  return y_bounds.Width() * y_bounds.Width();
}

TuningResult TuneModels(const std::vector<ModelSpec>& candidates,
                        const TrainingData& data, RandomSource& rng) {
  if (candidates.empty()) throw InvalidArgumentError("no candidates to tune");
  const ModelSpec& first = candidates.front();
  for (const ModelSpec& c : candidates) {
    c.Validate();
    if (c.kind != first.kind) {
      throw InvalidArgumentError("tuning candidates must share a model kind");
    }
    if (!(c.budget == first.budget)) {
      throw InvalidArgumentError("tuning candidates must share a budget");
    }
  }
  if (data.X.rows() != data.y.size()) {
    throw DataError("X and y have different numbers of rows");
  }
  TuningResult result;
  if (IsClassifier(first.kind)) {
    result.sensitivity = kMisclassificationSensitivity;
  } else {
    if (!data.y_bounds) {
      throw InvalidArgumentError("linear regression tuning needs bounds on y");
    }
    result.sensitivity = SquaredErrorSensitivity(*data.y_bounds);
  }

  const size_t m = candidates.size();
  result.folds = SplitFolds(static_cast<size_t>(data.X.rows()), m, rng);
  const TrainingData validation = Subset(data, result.folds.back());
  std::vector<TrainedModel> models;
  for (size_t i = 0; i < m; ++i) {
    models.push_back(FitModel(candidates[i], Subset(data, result.folds[i]), rng));
    result.utilities.push_back(Utility(models.back(), validation));
  }
  result.selected =
      ExponentialMechanism(result.utilities,
                           PrivacyBudget::Pure(first.budget.epsilon()),
                           result.sensitivity, rng);
  result.model = std::move(models[result.selected]);
  return result;
}

}  // namespace dpkit
