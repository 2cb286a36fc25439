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

#ifndef DPKIT_ERM_H_
#define DPKIT_ERM_H_

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "dpkit/losses.h"
#include "dpkit/mechanisms.h"
#include "dpkit/minimize.h"
#include "dpkit/random.h"

namespace dpkit {

enum class Perturbation { kOutput, kObjective };

std::string ToString(Perturbation perturbation);

struct ErmConfig {
  PrivacyBudget budget = PrivacyBudget::Pure(1.0);
  double gamma = 1.0;
  Perturbation perturbation = Perturbation::kObjective;
  double weight_upper_bound = 1.0;

  // Pure budget, gamma > 0, weight_upper_bound > 0.
  void Validate() const;
};

struct ErmResult {
  Eigen::VectorXd theta;
  // The drawn noise vector b (added to the output, or the linear term's b).
  Eigen::VectorXd noise;
  // Extra ridge coefficient Δ placed on ‖θ‖²/(2n); 0 for output perturbation.
  double slack = 0.0;
  // Privacy parameter the noise was calibrated to (ε′ for objective
  // perturbation, ε otherwise).
  double noise_epsilon = 0.0;
  MinimizeResult solver;
};

// Rate β = γε / (2 w_ub) of the output-perturbation noise density
// ∝ exp(-β‖b‖₂).
double OutputPerturbationRate(double epsilon, double gamma,
                              double weight_upper_bound);

// ε′ = ε - 2 ln(1 + c/γ). If ε′ ≤ 0 the slack Δ = c/(e^{ε/4} - 1) - γ is
// added and ε′ = ε/2; otherwise Δ = 0.
struct ObjectiveCalibration {
  double epsilon_prime;
  double slack;
};
ObjectiveCalibration CalibrateObjectivePerturbation(double epsilon,
                                                    double gamma,
                                                    double curvature_bound);

// A p-vector whose direction is uniform on the sphere and whose norm is
// Gamma(shape p, scale), i.e. density ∝ exp(-‖b‖₂ / scale). Draws p standard
// normals for the direction, then p exponentials for the norm.
Eigen::VectorXd SampleGammaNormNoise(Eigen::Index p, double scale,
                                     RandomSource& rng);

// Regularized ERM with Chaudhuri-style output or objective perturbation.
//
// Rows of X must have ‖x_i‖₂ ≤ 1 (tolerance 1e-9) and y_i ∈ {-1, +1}.
// `weights` (output perturbation only) must lie in [0, weight_upper_bound].
// Throws InvalidArgumentError / DataError on any violated precondition.
ErmResult ErmCms(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const Loss& loss, const Regularizer& reg,
                 const ErmConfig& config,
                 const std::optional<Eigen::VectorXd>& weights,
                 RandomSource& rng, const MinimizeOptions& options = {});

struct KstConfig {
  PrivacyBudget budget = PrivacyBudget::Pure(1.0);
  double gamma = 1.0;
  Domain domain = Domain::Unconstrained();

  void Validate() const;
};

// Slack Δ = 2λ/ε.
double KstSlack(double epsilon, double eigen_bound);
// σ = ζ √(8 ln(2/δ) + 4ε) / ε of the Gaussian linear term.
double KstGaussianSigma(double epsilon, double delta, double grad_norm_bound);
// Scale 2ζ/ε of the Gamma-norm linear term.
double KstGammaScale(double epsilon, double grad_norm_bound);

// Regression ERM with Kifer-style objective perturbation over `domain`:
// minimizes (1/n)Σℓ + (γ/n)R + (Δ/(2n))‖θ‖² + bᵀθ/n. With δ > 0 the linear
// term is Gaussian, otherwise Gamma-norm. Rows must satisfy ‖x_i‖₂ ≤ √p.
ErmResult ErmKst(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const Loss& loss, const Regularizer& reg,
                 const KstConfig& config, RandomSource& rng,
                 const MinimizeOptions& options = {});

// The same objective with no noise and no slack: the non-private reference.
MinimizeResult MinimizeRegularizedRisk(
    const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Loss& loss,
    const Regularizer& reg, double gamma,
    const std::optional<Eigen::VectorXd>& weights, const Domain& domain,
    const MinimizeOptions& options = {});

}  // namespace dpkit

#endif  // DPKIT_ERM_H_
