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
#include <sstream>

#include "dpkit/errors.h"
#include "dpkit/losses.h"

namespace dpkit {
namespace {

Eigen::VectorXd SignedLabels(const Eigen::VectorXd& y) {
  Eigen::VectorXd out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) == 0.0) {
      out(i) = -1.0;
    } else if (y(i) == 1.0) {
      out(i) = 1.0;
    } else {
      std::ostringstream msg;
      msg << "label " << y(i) << " at row " << i << " is not 0 or 1";
      throw DataError(msg.str());
    }
  }
  return out;
}

ErmConfig ClassificationConfig(const ModelSpec& spec) {
  ErmConfig config;
  config.budget = spec.budget;
  config.gamma = spec.gamma;
  config.perturbation = spec.perturbation;
  config.weight_upper_bound = spec.weight_upper_bound.value_or(1.0);
  return config;
}

void FitClassifier(const ModelSpec& spec, const TrainingData& data,
                   RandomSource& rng, TrainedModel& model) {
  const Eigen::VectorXd labels = SignedLabels(data.y);
  if (data.weights) {
    if (spec.kind == ModelKind::kLogistic) {
      throw InvalidArgumentError("observation weights are supported for SVMs only");
    }
    if (!spec.weight_upper_bound) {
      throw InvalidArgumentError("weights require a weight upper bound");
    }
  }
  const Loss loss = spec.kind == ModelKind::kLogistic
                        ? LogisticLoss()
                        : HuberHingeLoss(spec.huber_h);
  const ErmConfig config = ClassificationConfig(spec);

  Eigen::MatrixXd features;
  if (spec.kind == ModelKind::kSvmGaussian) {
    if (!data.bounds.empty()) {
      model.warnings.push_back(
          "bounds are not needed for the Gaussian kernel and were ignored");
    }
    const Eigen::MatrixXd augmented =
        spec.add_bias ? AddBiasColumn(data.X) : data.X;
    const double beta = spec.kernel_param.value_or(
        1.0 / static_cast<double>(data.X.cols()));
    model.rff.emplace(spec.rff_dim, augmented.cols(), beta, rng.NextBits());
    features = model.rff->TransformRows(augmented);
  } else {
    const Eigen::MatrixXd X = CheckWithinBounds(data.X, data.bounds);
    model.scaler = FeatureScaler::ForClassification(data.bounds, spec.add_bias);
    features = model.scaler->Transform(X);
  }

  const ErmResult fit = ErmCms(features, labels, loss, L2Regularizer(), config,
                               data.weights, rng);
  model.scaled_coefficients = fit.theta;
  model.coefficients = model.scaler
                           ? model.scaler->UnscaleCoefficients(fit.theta)
                           : fit.theta;
  model.converged = fit.solver.converged;
}

void FitLinear(const ModelSpec& spec, const TrainingData& data,
               RandomSource& rng, TrainedModel& model) {
  if (!data.y_bounds) {
    throw InvalidArgumentError("linear regression needs bounds on y");
  }
  if (data.weights) {
    throw InvalidArgumentError("linear regression does not take weights");
  }
  const Bounds& yb = *data.y_bounds;
  yb.Validate();
  for (Eigen::Index i = 0; i < data.y.size(); ++i) {
    if (!yb.Contains(data.y(i), 1e-9)) {
      std::ostringstream msg;
      msg << "response " << data.y(i) << " at row " << i
          << " is outside its bounds [" << yb.lower << ", " << yb.upper << "]";
      throw DataError(msg.str());
    }
  }
  const Eigen::MatrixXd X = CheckWithinBounds(data.X, data.bounds);
  model.scaler = FeatureScaler::ForRegression(data.bounds, spec.add_bias);
  const Eigen::MatrixXd features = model.scaler->Transform(X);
  const double p = static_cast<double>(model.scaler->dimension());

  // Centre y on its midrange when an intercept can absorb the shift, then
  // scale into [-p, p].
  model.y_shift = spec.add_bias ? 0.5 * (yb.lower + yb.upper) : 0.0;
  model.y_scale =
      std::max(std::abs(yb.lower - model.y_shift),
               std::abs(yb.upper - model.y_shift)) / p;
  const Eigen::VectorXd y =
      ((data.y.array().cwiseMax(yb.lower).cwiseMin(yb.upper) - model.y_shift) /
       model.y_scale)
          .matrix();

  KstConfig config;
  config.budget = spec.budget;
  config.gamma = spec.gamma;
  config.domain = Domain::Ball(std::sqrt(p));
  const ErmResult fit =
      ErmKst(features, y, SquaredLoss(p), L2Regularizer(), config, rng);
  model.scaled_coefficients = fit.theta;
  model.coefficients =
      model.scaler->UnscaleCoefficients(fit.theta) * model.y_scale;
  if (spec.add_bias) model.coefficients(0) += model.y_shift;
  model.converged = fit.solver.converged;
}

}  // namespace

std::string ToString(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogistic:
      return "logistic";
    case ModelKind::kSvmLinear:
      return "svm_linear";
    case ModelKind::kSvmGaussian:
      return "svm_gaussian";
    case ModelKind::kLinear:
      return "linear";
  }
  return "unknown";
}

ModelKind ModelKindFromString(const std::string& name) {
  for (ModelKind kind : {ModelKind::kLogistic, ModelKind::kSvmLinear,
                         ModelKind::kSvmGaussian, ModelKind::kLinear}) {
    if (ToString(kind) == name) return kind;
  }
  throw InvalidArgumentError("unknown model kind '" + name + "'");
}

void ModelSpec::Validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgumentError("gamma must be positive and finite");
  }
  if (IsClassifier(kind) && budget.variant() != DpVariant::kPure) {
    throw InvalidArgumentError("classifiers need a pure (delta = 0) budget");
  }
  if (kind == ModelKind::kSvmLinear || kind == ModelKind::kSvmGaussian) {
    if (!(huber_h > 0.0) || !std::isfinite(huber_h)) {
      throw InvalidArgumentError("huber_h must be positive");
    }
  }
  if (kind == ModelKind::kSvmGaussian && rff_dim <= 0) {
    throw InvalidArgumentError(
        "the Gaussian kernel needs a positive feature dimension D");
  }
  if (kernel_param && (!(*kernel_param > 0.0) || !std::isfinite(*kernel_param))) {
    throw InvalidArgumentError("kernel parameter must be positive");
  }
  if (weight_upper_bound &&
      (!(*weight_upper_bound > 0.0) || !std::isfinite(*weight_upper_bound))) {
    throw InvalidArgumentError("weight upper bound must be positive");
  }
}

TrainedModel FitModel(const ModelSpec& spec, const TrainingData& data,
                      RandomSource& rng) {
  spec.Validate();
  if (data.X.rows() == 0 || data.X.cols() == 0) {
    throw DataError("training data must have at least one row and column");
  }
  if (data.X.rows() != data.y.size()) {
    throw DataError("X and y have different numbers of rows");
  }
  if (!data.X.allFinite() || !data.y.allFinite()) {
    throw DataError("training data contains non-finite values");
  }
  TrainedModel model;
  model.kind = spec.kind;
  model.spec = spec;
  model.num_features = data.X.cols();
  if (IsClassifier(spec.kind)) {
    FitClassifier(spec, data, rng, model);
  } else {
    FitLinear(spec, data, rng, model);
  }
  if (!model.converged) {
    model.warnings.push_back("the minimizer stopped before reaching tolerance");
  }
  return model;
}

double ClassifyRaw(ModelKind kind, double raw) {
  const double threshold = kind == ModelKind::kLogistic ? 0.5 : 0.0;
  return raw >= threshold ? 1.0 : 0.0;
}

Eigen::VectorXd Predict(const TrainedModel& model, const Eigen::MatrixXd& X,
                        bool raw) {
  if (X.cols() != model.num_features) {
    std::ostringstream msg;
    msg << "model expects " << model.num_features << " feature columns, got "
        << X.cols();
    throw DataError(msg.str());
  }
  const Eigen::MatrixXd augmented =
      model.spec.add_bias ? AddBiasColumn(X) : X;
  Eigen::VectorXd out = model.rff
                            ? Eigen::VectorXd(model.rff->TransformRows(augmented) *
                                              model.coefficients)
                            : Eigen::VectorXd(augmented * model.coefficients);
  if (model.kind == ModelKind::kLogistic) {
    out = out.unaryExpr([](double f) {
      return f >= 0 ? 1.0 / (1.0 + std::exp(-f))
                    : std::exp(f) / (1.0 + std::exp(f));
    });
  }
  if (raw || model.kind == ModelKind::kLinear) return out;
  return out.unaryExpr(
      [&model](double r) { return ClassifyRaw(model.kind, r); });
}

}  // namespace dpkit
