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

#include "dpkit/erm.h"

#include <cmath>
#include <sstream>

#include "dpkit/errors.h"

namespace dpkit {
namespace {

constexpr double kRowNormTolerance = 1e-9;

void CheckShapes(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() == 0 || X.cols() == 0) {
    throw DataError("training data must have at least one row and column");
  }
  if (X.rows() != y.size()) {
    throw DataError("X and y have different numbers of rows");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw DataError("training data contains non-finite values");
  }
}

void CheckRowNorms(const Eigen::MatrixXd& X, double bound) {
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double norm = X.row(i).norm();
    if (norm > bound + kRowNormTolerance) {
      std::ostringstream msg;
      msg << "row " << i << " has norm " << norm << " above " << bound;
      throw DataError(msg.str());
    }
  }
}

// (1/n)Σ w_i ℓ(x_i θ, y_i) + (γ/n)R(θ) + (Δ/(2n))‖θ‖² + bᵀθ/n.
Objective PerturbedObjective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             const Loss& loss, const Regularizer& reg,
                             double gamma,
                             const std::optional<Eigen::VectorXd>& weights,
                             double slack, const Eigen::VectorXd& b) {
  const double n = static_cast<double>(X.rows());
  return [&X, &y, &loss, &reg, gamma, &weights, slack, &b, n](
             const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
    const Eigen::VectorXd f = X * theta;
    double value = 0.0;
    Eigen::VectorXd df(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const double w = weights ? (*weights)(i) : 1.0;
      value += w * loss.value(f(i), y(i));
      df(i) = w * loss.derivative(f(i), y(i));
    }
    value = value / n + gamma / n * reg.value(theta) +
            slack / (2.0 * n) * theta.squaredNorm() + b.dot(theta) / n;
    if (grad != nullptr) {
      *grad = (X.transpose() * df + gamma * reg.gradient(theta) +
               slack * theta + b) /
              n;
    }
    return value;
  };
}

}  // namespace

std::string ToString(Perturbation perturbation) {
  return perturbation == Perturbation::kOutput ? "output" : "objective";
}

void ErmConfig::Validate() const {
  if (budget.variant() != DpVariant::kPure) {
    throw InvalidArgumentError("classification ERM needs a pure budget");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgumentError("gamma must be positive and finite");
  }
  if (!(weight_upper_bound > 0.0) || !std::isfinite(weight_upper_bound)) {
    throw InvalidArgumentError("weight upper bound must be positive");
  }
}

double OutputPerturbationRate(double epsilon, double gamma,
                              double weight_upper_bound) {
  return gamma * epsilon / (2.0 * weight_upper_bound);
}

ObjectiveCalibration CalibrateObjectivePerturbation(double epsilon,
                                                    double gamma,
                                                    double curvature_bound) {
  const double eps_prime = epsilon - 2.0 * std::log1p(curvature_bound / gamma);
  if (eps_prime > 0.0) return {eps_prime, 0.0};
  return {epsilon / 2.0,
          curvature_bound / std::expm1(epsilon / 4.0) - gamma};
}

Eigen::VectorXd SampleGammaNormNoise(Eigen::Index p, double scale,
                                     RandomSource& rng) {
  Eigen::VectorXd direction(p);
  double norm = 0.0;
  do {
    for (Eigen::Index j = 0; j < p; ++j) direction(j) = rng.StandardNormal();
    norm = direction.norm();
  } while (norm == 0.0);
  double magnitude = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) magnitude += rng.StandardExponential();
  return direction * (scale * magnitude / norm);
}

MinimizeResult MinimizeRegularizedRisk(
    const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Loss& loss,
    const Regularizer& reg, double gamma,
    const std::optional<Eigen::VectorXd>& weights, const Domain& domain,
    const MinimizeOptions& options) {
  CheckShapes(X, y);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(X.cols());
  return Minimize(PerturbedObjective(X, y, loss, reg, gamma, weights, 0.0, zero),
                  zero, domain, options);
}

ErmResult ErmCms(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const Loss& loss, const Regularizer& reg,
                 const ErmConfig& config,
                 const std::optional<Eigen::VectorXd>& weights,
                 RandomSource& rng, const MinimizeOptions& options) {
  config.Validate();
  CheckShapes(X, y);
  CheckRowNorms(X, 1.0);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) != 1.0 && y(i) != -1.0) {
      throw DataError("classification labels must be -1 or +1");
    }
  }
  if (!reg.strongly_convex) {
    throw InvalidArgumentError("the regularizer must be strongly convex");
  }
  if (weights) {
    if (config.perturbation != Perturbation::kOutput) {
      throw InvalidArgumentError(
          "weighted ERM supports output perturbation only");
    }
    if (weights->size() != X.rows()) {
      throw DataError("weights and X have different numbers of rows");
    }
    for (Eigen::Index i = 0; i < weights->size(); ++i) {
      const double w = (*weights)(i);
      if (!(w >= 0.0) || w > config.weight_upper_bound) {
        std::ostringstream msg;
        msg << "weight " << w << " at row " << i << " is outside [0, "
            << config.weight_upper_bound << "]";
        throw DataError(msg.str());
      }
    }
  }

  const Eigen::Index p = X.cols();
  const double epsilon = config.budget.epsilon();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p);
  ErmResult result;
  if (config.perturbation == Perturbation::kOutput) {
    result.solver = Minimize(
        PerturbedObjective(X, y, loss, reg, config.gamma, weights, 0.0, zero),
        zero, Domain::Unconstrained(), options);
    const double rate = OutputPerturbationRate(epsilon, config.gamma,
                                               config.weight_upper_bound);
    result.noise = SampleGammaNormNoise(p, 1.0 / rate, rng);
    result.theta = result.solver.x + result.noise;
    result.noise_epsilon = epsilon;
    return result;
  }

  if (!reg.twice_differentiable) {
    throw InvalidArgumentError(
        "objective perturbation needs a twice-differentiable regularizer");
  }
  if (!loss.curvature_bound) {
    throw InvalidArgumentError(
        "objective perturbation needs a loss with a curvature bound");
  }
  const ObjectiveCalibration cal =
      CalibrateObjectivePerturbation(epsilon, config.gamma,
                                     *loss.curvature_bound);
  result.slack = cal.slack;
  result.noise_epsilon = cal.epsilon_prime;
  result.noise = SampleGammaNormNoise(p, 2.0 / cal.epsilon_prime, rng);
  result.solver = Minimize(PerturbedObjective(X, y, loss, reg, config.gamma,
                                              std::nullopt, cal.slack,
                                              result.noise),
                           zero, Domain::Unconstrained(), options);
  result.theta = result.solver.x;
  return result;
}

void KstConfig::Validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgumentError("gamma must be positive and finite");
  }
}

double KstSlack(double epsilon, double eigen_bound) {
  return 2.0 * eigen_bound / epsilon;
}

double KstGaussianSigma(double epsilon, double delta, double grad_norm_bound) {
  return grad_norm_bound * std::sqrt(8.0 * std::log(2.0 / delta) + 4.0 * epsilon) /
         epsilon;
}

double KstGammaScale(double epsilon, double grad_norm_bound) {
  return 2.0 * grad_norm_bound / epsilon;
}

ErmResult ErmKst(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const Loss& loss, const Regularizer& reg,
                 const KstConfig& config, RandomSource& rng,
                 const MinimizeOptions& options) {
  config.Validate();
  CheckShapes(X, y);
  if (!loss.grad_norm_bound || !loss.eigen_bound) {
    throw InvalidArgumentError(
        "regression ERM needs gradient-norm and eigenvalue bounds");
  }
  const Eigen::Index p = X.cols();
  CheckRowNorms(X, std::sqrt(static_cast<double>(p)));

  const double epsilon = config.budget.epsilon();
  ErmResult result;
  result.slack = KstSlack(epsilon, *loss.eigen_bound);
  result.noise_epsilon = epsilon;
  if (config.budget.variant() == DpVariant::kPure) {
    result.noise =
        SampleGammaNormNoise(p, KstGammaScale(epsilon, *loss.grad_norm_bound),
                             rng);
  } else {
    const double sigma = KstGaussianSigma(epsilon, config.budget.delta(),
                                          *loss.grad_norm_bound);
    result.noise.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      result.noise(j) = sigma * rng.StandardNormal();
    }
  }
  result.solver = Minimize(
      PerturbedObjective(X, y, loss, reg, config.gamma, std::nullopt,
                         result.slack, result.noise),
      Eigen::VectorXd::Zero(p), config.domain, options);
  result.theta = result.solver.x;
  return result;
}

}  // namespace dpkit
