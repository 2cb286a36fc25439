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

#include "dpkit/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dpkit/errors.h"
#include "dpkit/normal.h"

namespace dpkit {
namespace {

void CheckDimension(size_t values, size_t expected, const char* what) {
  if (values != expected) {
    std::ostringstream msg;
    msg << what << " has length " << values << " but the statistic has "
        << expected << " coordinates";
    throw InvalidArgumentError(msg.str());
  }
}

// Δ / ε' with the convention that zero sensitivity means zero noise even when
// the coordinate received no budget.
double NoiseScale(double sensitivity, double epsilon) {
  if (sensitivity == 0.0) return 0.0;
  return sensitivity / epsilon;
}

std::vector<double> ProportionalToSensitivity(
    const std::vector<double>& sensitivities) {
  const double total =
      std::accumulate(sensitivities.begin(), sensitivities.end(), 0.0);
  std::vector<double> proportions(sensitivities.size(), 0.0);
  if (total == 0.0) return proportions;
  for (size_t i = 0; i < sensitivities.size(); ++i) {
    proportions[i] = sensitivities[i] / total;
  }
  return proportions;
}

}  // namespace

std::string ToString(DpVariant variant) {
  switch (variant) {
    case DpVariant::kPure:
      return "pure";
    case DpVariant::kApproximate:
      return "approximate";
    case DpVariant::kProbabilistic:
      return "probabilistic";
  }
  return "unknown";
}

std::string ToString(NeighborModel neighbor) {
  return neighbor == NeighborModel::kBounded ? "bounded" : "unbounded";
}

PrivacyBudget::PrivacyBudget(double epsilon, double delta, DpVariant variant)
    : epsilon_(epsilon), delta_(delta), variant_(variant) {
  if (!(epsilon > 0.0) || std::isnan(epsilon)) {
    throw InvalidArgumentError("epsilon must be positive");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw InvalidArgumentError("delta must lie in [0, 1)");
  }
  if ((variant == DpVariant::kPure) != (delta == 0.0)) {
    throw InvalidArgumentError(
        "delta must be 0 for pure DP and positive otherwise");
  }
}

PrivacyBudget PrivacyBudget::Pure(double epsilon) {
  return PrivacyBudget(epsilon, 0.0, DpVariant::kPure);
}

PrivacyBudget PrivacyBudget::Approximate(double epsilon, double delta) {
  return PrivacyBudget(epsilon, delta, DpVariant::kApproximate);
}

PrivacyBudget PrivacyBudget::Probabilistic(double epsilon, double delta) {
  return PrivacyBudget(epsilon, delta, DpVariant::kProbabilistic);
}

PrivacyBudget PrivacyBudget::Scaled(double fraction) const {
  return PrivacyBudget(epsilon_ * fraction, delta_ * fraction, variant_);
}

void SensitivitySpec::Validate(size_t dimension) const {
  if (per_coordinate.empty()) {
    throw InvalidArgumentError("sensitivity vector is empty");
  }
  for (double s : per_coordinate) {
    if (!std::isfinite(s) || s < 0.0) {
      throw InvalidArgumentError("sensitivities must be finite and >= 0");
    }
  }
  CheckDimension(per_coordinate.size(), dimension, "sensitivity");
}

BudgetAllocation::BudgetAllocation(std::vector<double> proportions)
    : proportions_(std::move(proportions)) {
  if (proportions_.empty()) {
    throw InvalidArgumentError("allocation is empty");
  }
  double sum = 0.0;
  for (double a : proportions_) {
    if (!std::isfinite(a) || a <= 0.0) {
      throw InvalidArgumentError("allocation proportions must be positive");
    }
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvalidArgumentError("allocation proportions must sum to 1");
  }
}

double LaplaceInverseCdf(double u, double scale) {
  const double centered = u - 0.5;
  if (centered == 0.0 || scale == 0.0) return 0.0;
  const double sign = centered > 0.0 ? 1.0 : -1.0;
  return -scale * sign * std::log1p(-2.0 * std::abs(centered));
}

std::vector<double> LaplaceScales(
    const PrivacyBudget& budget, const SensitivitySpec& sens,
    const std::optional<BudgetAllocation>& alloc) {
  if (budget.variant() != DpVariant::kPure) {
    throw InvalidArgumentError("the Laplace mechanism provides pure DP only");
  }
  if (sens.norm != Norm::kL1) {
    throw InvalidArgumentError("the Laplace mechanism needs l1 sensitivity");
  }
  const size_t dim = sens.per_coordinate.size();
  sens.Validate(dim);
  std::vector<double> proportions;
  if (alloc) {
    CheckDimension(alloc->size(), dim, "allocation");
    proportions = alloc->proportions();
  } else {
    proportions = ProportionalToSensitivity(sens.per_coordinate);
  }
  std::vector<double> scales(dim);
  for (size_t i = 0; i < dim; ++i) {
    scales[i] =
        NoiseScale(sens.per_coordinate[i], budget.epsilon() * proportions[i]);
  }
  return scales;
}

std::vector<double> LaplaceMechanism(
    std::span<const double> values, const PrivacyBudget& budget,
    const SensitivitySpec& sens, const std::optional<BudgetAllocation>& alloc,
    RandomSource& rng) {
  CheckDimension(sens.per_coordinate.size(), values.size(), "sensitivity");
  const std::vector<double> scales = LaplaceScales(budget, sens, alloc);
  std::vector<double> out(values.begin(), values.end());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] += LaplaceInverseCdf(rng.Uniform(), scales[i]);
  }
  return out;
}

std::vector<double> AddLaplaceNoise(std::span<const double> values,
                                    double scale, RandomSource& rng) {
  if (!std::isfinite(scale) || scale < 0.0) {
    throw InvalidArgumentError("Laplace scale must be finite and >= 0");
  }
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v += LaplaceInverseCdf(rng.Uniform(), scale);
  return out;
}

double GaussianSigma(const PrivacyBudget& budget, double l2_sensitivity) {
  if (!std::isfinite(l2_sensitivity) || l2_sensitivity < 0.0) {
    throw InvalidArgumentError("sensitivity must be finite and >= 0");
  }
  const double eps = budget.epsilon();
  const double delta = budget.delta();
  switch (budget.variant()) {
    case DpVariant::kPure:
      throw InvalidArgumentError(
          "the Gaussian mechanism needs delta > 0 (approximate or "
          "probabilistic DP)");
    case DpVariant::kApproximate:
      if (eps >= 1.0) {
        throw InvalidArgumentError(
            "approximate-DP Gaussian calibration requires epsilon in (0, 1)");
      }
      if (l2_sensitivity == 0.0) return 0.0;
      return l2_sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / eps;
    case DpVariant::kProbabilistic: {
      if (l2_sensitivity == 0.0) return 0.0;
      const double z = InverseNormalCdf(delta / 2.0);
      return l2_sensitivity * (std::sqrt(z * z + 2.0 * eps) - z) / (2.0 * eps);
    }
  }
  return 0.0;
}

std::vector<double> GaussianSigmas(
    const PrivacyBudget& budget, const SensitivitySpec& sens,
    const std::optional<BudgetAllocation>& alloc) {
  if (sens.norm != Norm::kL2) {
    throw InvalidArgumentError("the Gaussian mechanism needs l2 sensitivity");
  }
  const size_t dim = sens.per_coordinate.size();
  sens.Validate(dim);
  std::vector<double> sigmas(dim);
  if (!alloc) {
    double sum_sq = 0.0;
    for (double s : sens.per_coordinate) sum_sq += s * s;
    std::fill(sigmas.begin(), sigmas.end(),
              GaussianSigma(budget, std::sqrt(sum_sq)));
    return sigmas;
  }
  CheckDimension(alloc->size(), dim, "allocation");
  for (size_t i = 0; i < dim; ++i) {
    sigmas[i] = GaussianSigma(budget.Scaled(alloc->proportions()[i]),
                              sens.per_coordinate[i]);
  }
  return sigmas;
}

std::vector<double> GaussianMechanism(
    std::span<const double> values, const PrivacyBudget& budget,
    const SensitivitySpec& sens, const std::optional<BudgetAllocation>& alloc,
    RandomSource& rng) {
  CheckDimension(sens.per_coordinate.size(), values.size(), "sensitivity");
  const std::vector<double> sigmas = GaussianSigmas(budget, sens, alloc);
  std::vector<double> out(values.begin(), values.end());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] += sigmas[i] * rng.StandardNormal();
  }
  return out;
}

std::vector<double> AddGaussianNoise(std::span<const double> values,
                                     double sigma, RandomSource& rng) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw InvalidArgumentError("Gaussian sigma must be finite and >= 0");
  }
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v += sigma * rng.StandardNormal();
  return out;
}

std::vector<double> ExponentialMechanismProbabilities(
    std::span<const double> utility, double epsilon, double sensitivity,
    std::span<const double> measure) {
  const size_t n = utility.size();
  if (n == 0) throw InvalidArgumentError("utility vector is empty");
  if (!(epsilon > 0.0)) throw InvalidArgumentError("epsilon must be positive");
  if (!std::isfinite(sensitivity) || sensitivity < 0.0) {
    throw InvalidArgumentError("utility sensitivity must be finite and >= 0");
  }
  std::vector<double> weights(n, 1.0);
  if (!measure.empty()) {
    CheckDimension(measure.size(), n, "measure");
    weights.assign(measure.begin(), measure.end());
  }
  bool any_positive = false;
  for (double m : weights) {
    if (!std::isfinite(m) || m < 0.0) {
      throw InvalidArgumentError("measure entries must be finite and >= 0");
    }
    any_positive = any_positive || m > 0.0;
  }
  if (!any_positive) throw InvalidArgumentError("measure is all zero");
  for (double u : utility) {
    if (!std::isfinite(u)) throw InvalidArgumentError("utility must be finite");
  }

  double max_utility = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    if (weights[i] > 0.0) max_utility = std::max(max_utility, utility[i]);
  }

  const double factor = epsilon / (2.0 * sensitivity);
  std::vector<double> probs(n, 0.0);
  if (std::isinf(factor)) {
    for (size_t i = 0; i < n; ++i) {
      if (weights[i] > 0.0 && utility[i] == max_utility) probs[i] = weights[i];
    }
  } else {
    std::vector<double> log_weight(n, -std::numeric_limits<double>::infinity());
    double max_log = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
      if (weights[i] == 0.0) continue;
      log_weight[i] = factor * (utility[i] - max_utility) + std::log(weights[i]);
      max_log = std::max(max_log, log_weight[i]);
    }
    for (size_t i = 0; i < n; ++i) {
      if (weights[i] > 0.0) probs[i] = std::exp(log_weight[i] - max_log);
    }
  }
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& p : probs) p /= total;
  return probs;
}

size_t ExponentialMechanism(std::span<const double> utility,
                            const PrivacyBudget& budget, double sensitivity,
                            std::span<const double> measure,
                            RandomSource& rng) {
  if (budget.variant() != DpVariant::kPure) {
    throw InvalidArgumentError("the exponential mechanism provides pure DP");
  }
  const std::vector<double> probs = ExponentialMechanismProbabilities(
      utility, budget.epsilon(), sensitivity, measure);
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  const double target = rng.Uniform() * total;
  double cumulative = 0.0;
  size_t last_positive = 0;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = i;
    cumulative += probs[i];
    if (cumulative >= target) return i;
  }
  return last_positive;
}

}  // namespace dpkit
