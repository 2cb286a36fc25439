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

// Reference implementations used as test oracles. None of these call into
// the library's minimizer, losses or statistics, so agreement with them is
// independent evidence.

#ifndef DPKIT_TESTS_TESTING_ORACLES_H_
#define DPKIT_TESTS_TESTING_ORACLES_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dpkit::testing {

// ---- Plain statistics ------------------------------------------------------

double NaiveMean(std::span<const double> x);
// n - 1 denominator.
double NaiveVariance(std::span<const double> x);
double NaiveCovariance(std::span<const double> x, std::span<const double> y);
// Σ_j Σ_i (x_ij - x̄_j)² / (N - k).
double NaivePooledVariance(const std::vector<std::vector<double>>& groups);
double NaivePooledCovariance(const std::vector<std::vector<double>>& x1,
                             const std::vector<std::vector<double>>& x2);

// ---- Empirical differential privacy ----------------------------------------

struct DpCheck {
  bool passed = true;
  // Largest P̂₁ - e^ε P̂₂ - δ - 3 SE over bins and both directions (≤ 0 passes).
  double worst_excess = -1.0;
  std::string detail;
};

// Histograms both samples on `bins` equal-width bins between the pooled
// 0.5% and 99.5% quantiles (the end bins absorb the tails) and checks
// P̂_a ≤ e^ε P̂_b + δ + 3·SE in every bin, in both directions, with
// SE = sqrt(p_a(1-p_a)/N_a + e^{2ε} p_b(1-p_b)/N_b).
DpCheck CheckEmpiricalDp(std::span<const double> a, std::span<const double> b,
                         double epsilon, double delta, int bins = 20);

// The same check for outputs that are category indices in [0, k).
DpCheck CheckEmpiricalDpDiscrete(std::span<const size_t> a,
                                 std::span<const size_t> b, size_t k,
                                 double epsilon, double delta);

// ---- Non-private model fits -------------------------------------------------

enum class OracleLoss { kLogistic, kHuber };

// Damped Newton on (1/n)Σ w_i ℓ(y_i x_iθ) + (γ/(2n))‖θ‖² with labels ±1 and
// analytic second derivatives. Converges to ‖∇‖ < 1e-13.
Eigen::VectorXd NewtonClassifierFit(const Eigen::MatrixXd& X,
                                    const Eigen::VectorXd& y, OracleLoss loss,
                                    double huber_h, double gamma,
                                    const Eigen::VectorXd* weights = nullptr);

// argmin over ‖θ‖ ≤ r of (1/(2n))‖Xθ - y‖² + (ridge/(2n))‖θ‖², via the
// Lagrange condition: a linear solve per multiplier and bisection on it.
Eigen::VectorXd ConstrainedRidge(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y, double ridge,
                                 double radius);

// Dense grid search of a 2-d function over [lo, hi]², refined three times
// around the best point.
Eigen::Vector2d GridMinimize2d(const std::function<double(double, double)>& f,
                               double lo, double hi);

// ---- Data -------------------------------------------------------------------

struct ToyClassification {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;  // {0, 1}
};

// Two slanted classes of `per_class` rows each: with t evenly spaced on
// [-1/4, 1/4] and m ~ N(∓0.2, 0.1²), x = (3t, m - t), label 0 for the first
// class and 1 for the second. Entries are clamped to [-1, 1].
ToyClassification MakeSlantedClasses(size_t per_class, uint64_t seed);

// Every tenth row (0, 10, 20, ...) goes to the test split.
void SplitEveryTenth(const ToyClassification& all, ToyClassification* train,
                     ToyClassification* test);

}  // namespace dpkit::testing

#endif  // DPKIT_TESTS_TESTING_ORACLES_H_
