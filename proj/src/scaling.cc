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
#include <sstream>

#include "dpkit/errors.h"

namespace dpkit {
namespace {

FeatureScaler MakeScaler(const std::vector<Bounds>& bounds, bool add_bias,
                         bool classification) {
  if (bounds.empty()) throw InvalidArgumentError("no feature bounds given");
  std::vector<double> divisors;
  if (add_bias) divisors.push_back(1.0);
  for (const Bounds& b : bounds) {
    b.Validate();
    const double d = b.MaxAbs();
    if (!(d > 0.0)) {
      throw InvalidArgumentError("feature bounds [0, 0] cannot be scaled");
    }
    divisors.push_back(d);
  }
  const double global =
      classification ? std::sqrt(static_cast<double>(divisors.size())) : 1.0;
  return FeatureScaler(std::move(divisors), global, add_bias);
}

}  // namespace

FeatureScaler FeatureScaler::ForClassification(
    const std::vector<Bounds>& bounds, bool add_bias) {
  return MakeScaler(bounds, add_bias, /*classification=*/true);
}

FeatureScaler FeatureScaler::ForRegression(const std::vector<Bounds>& bounds,
                                           bool add_bias) {
  return MakeScaler(bounds, add_bias, /*classification=*/false);
}

FeatureScaler::FeatureScaler(std::vector<double> column_divisors,
                             double global_divisor, bool bias_included)
    : divisors_(std::move(column_divisors)),
      global_divisor_(global_divisor),
      bias_included_(bias_included) {
  if (divisors_.empty() || (bias_included_ && divisors_.size() < 2)) {
    throw InvalidArgumentError("scaler needs at least one feature column");
  }
  for (double d : divisors_) {
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw InvalidArgumentError("scaler divisors must be positive");
    }
  }
  if (!(global_divisor_ > 0.0) || !std::isfinite(global_divisor_)) {
    throw InvalidArgumentError("scaler global divisor must be positive");
  }
}

Eigen::MatrixXd FeatureScaler::Transform(const Eigen::MatrixXd& X) const {
  const Eigen::MatrixXd augmented = bias_included_ ? AddBiasColumn(X) : X;
  if (static_cast<size_t>(augmented.cols()) != divisors_.size()) {
    std::ostringstream msg;
    msg << "expected " << divisors_.size() - (bias_included_ ? 1 : 0)
        << " feature columns, got " << X.cols();
    throw DataError(msg.str());
  }
  Eigen::MatrixXd out = augmented;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    out.col(j) /= divisors_[j] * global_divisor_;
  }
  return out;
}

Eigen::VectorXd FeatureScaler::UnscaleCoefficients(
    const Eigen::VectorXd& theta) const {
  Eigen::VectorXd out = theta;
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    out(j) /= divisors_[j] * global_divisor_;
  }
  return out;
}

Eigen::VectorXd FeatureScaler::ScaleCoefficients(
    const Eigen::VectorXd& theta) const {
  Eigen::VectorXd out = theta;
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    out(j) *= divisors_[j] * global_divisor_;
  }
  return out;
}

Eigen::MatrixXd AddBiasColumn(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd out(X.rows(), X.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(X.cols()) = X;
  return out;
}

Eigen::MatrixXd CheckWithinBounds(const Eigen::MatrixXd& X,
                                  const std::vector<Bounds>& bounds) {
  if (static_cast<size_t>(X.cols()) != bounds.size()) {
    std::ostringstream msg;
    msg << "bounds cover " << bounds.size() << " columns but the data has "
        << X.cols();
    throw DataError(msg.str());
  }
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (!bounds[j].Contains(X(i, j), 1e-9)) {
        std::ostringstream msg;
        msg << "value " << X(i, j) << " in row " << i << ", column " << j
            << " is outside its bounds [" << bounds[j].lower << ", "
            << bounds[j].upper << "]";
        throw DataError(msg.str());
      }
    }
  }
  Eigen::MatrixXd out = X;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    out.col(j) = out.col(j).cwiseMax(bounds[j].lower).cwiseMin(bounds[j].upper);
  }
  return out;
}

}  // namespace dpkit
