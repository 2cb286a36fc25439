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

#ifndef DPKIT_SCALING_H_
#define DPKIT_SCALING_H_

#include <vector>

#include <Eigen/Dense>

#include "dpkit/bounds.h"

namespace dpkit {

// Bounds-driven feature scaling for the ERM models.
//
// Column j is divided by max(|lower_j|, |upper_j|), then every entry by
// `global_divisor`: √p for classification (rows land in the unit ball) and 1
// for regression (rows land in the ball of radius √p). When a bias column is
// included it is column 0 with bounds [1, 1], so its divisor is 1, and p
// counts it.
class FeatureScaler {
 public:
  static FeatureScaler ForClassification(const std::vector<Bounds>& bounds,
                                         bool add_bias);
  static FeatureScaler ForRegression(const std::vector<Bounds>& bounds,
                                     bool add_bias);
  // Rebuilds a scaler from stored divisors.
  FeatureScaler(std::vector<double> column_divisors, double global_divisor,
                bool bias_included);

  // Prepends the bias column when bias_included, then scales. Rows of the
  // input must have one entry per declared feature.
  Eigen::MatrixXd Transform(const Eigen::MatrixXd& X) const;
  // θ_j / (d_j · g): coefficients for the unscaled (bias-augmented) features.
  Eigen::VectorXd UnscaleCoefficients(const Eigen::VectorXd& theta) const;
  // Inverse of UnscaleCoefficients.
  Eigen::VectorXd ScaleCoefficients(const Eigen::VectorXd& theta) const;

  // Including the bias divisor when present.
  const std::vector<double>& column_divisors() const { return divisors_; }
  double global_divisor() const { return global_divisor_; }
  bool bias_included() const { return bias_included_; }
  // Number of scaled columns (features plus bias).
  size_t dimension() const { return divisors_.size(); }

 private:
  std::vector<double> divisors_;
  double global_divisor_;
  bool bias_included_;
};

// Prepends a column of ones.
Eigen::MatrixXd AddBiasColumn(const Eigen::MatrixXd& X);

// Throws DataError if an entry of column j lies outside bounds[j] by more
// than 1e-9, or is NaN. Returns X with such tiny excursions clamped away.
Eigen::MatrixXd CheckWithinBounds(const Eigen::MatrixXd& X,
                                  const std::vector<Bounds>& bounds);

}  // namespace dpkit

#endif  // DPKIT_SCALING_H_
