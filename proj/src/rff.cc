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

#include "dpkit/rff.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dpkit/errors.h"
#include "dpkit/random.h"

namespace dpkit {

RffProjection::RffProjection(Eigen::Index D, Eigen::Index input_dim,
                             double beta, uint64_t seed)
    : beta_(beta), seed_(seed) {
  if (D <= 0) throw InvalidArgumentError("RFF dimension D must be positive");
  if (input_dim <= 0) throw InvalidArgumentError("RFF input must be nonempty");
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidArgumentError("kernel parameter beta must be positive");
  }
  RandomSource rng(seed);
  const double sd = std::sqrt(2.0 * beta);
  frequencies_.resize(D, input_dim);
  for (Eigen::Index j = 0; j < D; ++j) {
    for (Eigen::Index k = 0; k < input_dim; ++k) {
      frequencies_(j, k) = sd * rng.StandardNormal();
    }
  }
  phases_.resize(D);
  for (Eigen::Index j = 0; j < D; ++j) {
    phases_(j) = 2.0 * std::numbers::pi * rng.Uniform();
  }
}

Eigen::VectorXd RffProjection::Transform(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim()) {
    std::ostringstream msg;
    msg << "RFF expects " << input_dim() << " inputs, got " << x.size();
    throw DataError(msg.str());
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(dimension()));
  return ((frequencies_ * x + phases_).array().cos() * norm).matrix();
}

Eigen::MatrixXd RffProjection::TransformRows(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd out(X.rows(), dimension());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    out.row(i) = Transform(X.row(i).transpose()).transpose();
  }
  return out;
}

}  // namespace dpkit
