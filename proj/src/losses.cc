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

#include "dpkit/losses.h"

#include <cmath>

#include "dpkit/errors.h"

namespace dpkit {
namespace {

// log(1 + exp(-m)) without overflow.
double LogOnePlusExpNeg(double m) {
  return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

}  // namespace

Loss LogisticLoss() {
  Loss loss;
  loss.name = "logistic";
  loss.value = [](double f, double y) { return LogOnePlusExpNeg(y * f); };
  loss.derivative = [](double f, double y) {
    // -y / (1 + exp(y f)), written to stay finite for large |f|.
    const double m = y * f;
    const double s = m > 0 ? std::exp(-m) / (1.0 + std::exp(-m))
                           : 1.0 / (1.0 + std::exp(m));
    return -y * s;
  };
  loss.curvature_bound = 0.25;
  return loss;
}

double HuberHinge(double z, double h) {
  if (z > 1.0 + h) return 0.0;
  if (z < 1.0 - h) return 1.0 - z;
  const double t = 1.0 + h - z;
  return t * t / (4.0 * h);
}

double HuberHingeDerivative(double z, double h) {
  if (z > 1.0 + h) return 0.0;
  if (z < 1.0 - h) return -1.0;
  return -(1.0 + h - z) / (2.0 * h);
}

Loss HuberHingeLoss(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidArgumentError("Huber smoothing h must be positive and finite");
  }
  Loss loss;
  loss.name = "huber";
  loss.value = [h](double f, double y) { return HuberHinge(y * f, h); };
  loss.derivative = [h](double f, double y) {
    return y * HuberHingeDerivative(y * f, h);
  };
  loss.curvature_bound = 1.0 / (2.0 * h);
  return loss;
}

Loss SquaredLoss(double p) {
  if (!(p > 0.0)) throw InvalidArgumentError("p must be positive");
  Loss loss;
  loss.name = "squared";
  loss.value = [](double f, double y) { return 0.5 * (f - y) * (f - y); };
  loss.derivative = [](double f, double y) { return f - y; };
  loss.grad_norm_bound = 2.0 * std::pow(p, 1.5);
  loss.eigen_bound = p;
  return loss;
}

Regularizer L2Regularizer() {
  Regularizer reg;
  reg.name = "l2";
  reg.value = [](const Eigen::VectorXd& theta) {
    return 0.5 * theta.squaredNorm();
  };
  reg.gradient = [](const Eigen::VectorXd& theta) -> Eigen::VectorXd {
    return theta;
  };
  reg.strongly_convex = true;
  reg.twice_differentiable = true;
  return reg;
}

}  // namespace dpkit
