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

#ifndef DPKIT_MECHANISMS_H_
#define DPKIT_MECHANISMS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpkit/random.h"

namespace dpkit {

enum class DpVariant { kPure, kApproximate, kProbabilistic };

std::string ToString(DpVariant variant);

// Privacy-loss parameters (epsilon, delta) together with the flavour of DP
// they are meant to certify.
//
// Invariants: epsilon > 0; delta in [0, 1); delta == 0 iff variant is pure.
// The extra eps < 1 condition of the approximate Gaussian mechanism is checked
// where that calibration happens (GaussianSigma), since other approximate-DP
// algorithms do not need it.
class PrivacyBudget {
 public:
  static PrivacyBudget Pure(double epsilon);
  static PrivacyBudget Approximate(double epsilon, double delta);
  static PrivacyBudget Probabilistic(double epsilon, double delta);

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  DpVariant variant() const { return variant_; }

  // The same variant with both parameters multiplied by `fraction`.
  PrivacyBudget Scaled(double fraction) const;

  friend bool operator==(const PrivacyBudget&, const PrivacyBudget&) = default;

 private:
  PrivacyBudget(double epsilon, double delta, DpVariant variant);

  double epsilon_;
  double delta_;
  DpVariant variant_;
};

enum class Norm { kL1, kL2 };
enum class NeighborModel { kBounded, kUnbounded };

std::string ToString(NeighborModel neighbor);

// Per-coordinate global sensitivities of a (possibly vector-valued) statistic.
struct SensitivitySpec {
  Norm norm = Norm::kL1;
  std::vector<double> per_coordinate;
  NeighborModel neighbor = NeighborModel::kBounded;

  // Throws InvalidArgumentError unless nonempty, all entries finite and >= 0,
  // and the length equals `dimension`.
  void Validate(size_t dimension) const;
};

// How a total budget is divided across output coordinates.
class BudgetAllocation {
 public:
  // Proportions must be positive and sum to 1 within 1e-12.
  explicit BudgetAllocation(std::vector<double> proportions);

  const std::vector<double>& proportions() const { return proportions_; }
  size_t size() const { return proportions_.size(); }

 private:
  std::vector<double> proportions_;
};

// Laplace(0, scale) by inverse CDF of `u` in (0, 1). u = 0.5 gives 0.
double LaplaceInverseCdf(double u, double scale);

// Per-coordinate Laplace scales Δ_i / ε_i. Without `alloc`, ε_i is
// proportional to Δ_i, so every scale equals ΣΔ / ε.
std::vector<double> LaplaceScales(const PrivacyBudget& budget,
                                  const SensitivitySpec& sens,
                                  const std::optional<BudgetAllocation>& alloc);

// values + e, e_i ~ Lap(0, scale_i). One uniform is consumed per coordinate.
std::vector<double> LaplaceMechanism(
    std::span<const double> values, const PrivacyBudget& budget,
    const SensitivitySpec& sens, const std::optional<BudgetAllocation>& alloc,
    RandomSource& rng);

// Adds Lap(0, scale) noise to every coordinate.
std::vector<double> AddLaplaceNoise(std::span<const double> values,
                                    double scale, RandomSource& rng);

// Noise standard deviation for the Gaussian mechanism.
//   approximate:   σ = Δ₂ √(2 ln(1.25/δ)) / ε, requires ε in (0, 1)
//   probabilistic: σ = Δ₂ (√(z² + 2ε) − z) / (2ε), z = Φ⁻¹(δ/2)
double GaussianSigma(const PrivacyBudget& budget, double l2_sensitivity);

// Per-coordinate σ. Without `alloc` every coordinate uses the composite
// Δ₂ = √(ΣΔ_i²) and the full budget; with `alloc`, coordinate i gets
// (ε·a_i, δ·a_i) and its own Δ_i.
std::vector<double> GaussianSigmas(
    const PrivacyBudget& budget, const SensitivitySpec& sens,
    const std::optional<BudgetAllocation>& alloc);

std::vector<double> GaussianMechanism(
    std::span<const double> values, const PrivacyBudget& budget,
    const SensitivitySpec& sens, const std::optional<BudgetAllocation>& alloc,
    RandomSource& rng);

// Adds N(0, sigma²) noise to every coordinate.
std::vector<double> AddGaussianNoise(std::span<const double> values,
                                     double sigma, RandomSource& rng);

// Selection probabilities of the exponential mechanism,
//   P(i) ∝ measure_i · exp(ε u_i / (2Δ)),
// computed with max-subtraction. When ε/(2Δ) is infinite (Δ = 0) the mass
// goes to the maximal-utility entries in proportion to their measure.
// Entries with zero measure get probability 0.
std::vector<double> ExponentialMechanismProbabilities(
    std::span<const double> utility, double epsilon, double sensitivity,
    std::span<const double> measure = {});

// Draws an index from ExponentialMechanismProbabilities using one uniform:
// the first index whose cumulative weight reaches u · total.
size_t ExponentialMechanism(std::span<const double> utility,
                            const PrivacyBudget& budget, double sensitivity,
                            std::span<const double> measure, RandomSource& rng);

inline size_t ExponentialMechanism(std::span<const double> utility,
                                   const PrivacyBudget& budget,
                                   double sensitivity, RandomSource& rng) {
  return ExponentialMechanism(utility, budget, sensitivity, {}, rng);
}

}  // namespace dpkit

#endif  // DPKIT_MECHANISMS_H_
