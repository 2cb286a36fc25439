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

#ifndef DPKIT_LOSSES_H_
#define DPKIT_LOSSES_H_

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace dpkit {

// Per-observation loss ℓ(f, y) of a linear predictor f = xθ.
//
// The classification path needs |∂ℓ/∂f| ≤ 1 and, for objective perturbation,
// |∂²ℓ/∂f²| ≤ curvature_bound. The regression path needs grad_norm_bound (ζ)
// and eigen_bound (λ) on the θ-gradient and Hessian over the feasible set.
struct Loss {
  std::string name;
  std::function<double(double f, double y)> value;
  std::function<double(double f, double y)> derivative;
  std::optional<double> curvature_bound;
  std::optional<double> grad_norm_bound;
  std::optional<double> eigen_bound;
};

// log(1 + exp(-y f)) for y in {-1, +1}; c = 1/4.
Loss LogisticLoss();

// Huber approximation of the hinge loss applied to z = y f; c = 1/(2h).
Loss HuberHingeLoss(double h);

// (f - y)² / 2 for rows with ‖x‖ ≤ √p, ‖θ‖ ≤ √p and |y| ≤ p, giving
// ζ = 2 p^{3/2} and λ = p.
Loss SquaredLoss(double p);

//   1 - z                 z < 1 - h
//   (1 + h - z)² / (4h)   |1 - z| ≤ h
//   0                     z > 1 + h
double HuberHinge(double z, double h);
double HuberHingeDerivative(double z, double h);

struct Regularizer {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  bool strongly_convex = false;
  bool twice_differentiable = false;
};

// ‖θ‖² / 2, 1-strongly convex.
Regularizer L2Regularizer();

}  // namespace dpkit

#endif  // DPKIT_LOSSES_H_
