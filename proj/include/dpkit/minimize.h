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

#ifndef DPKIT_MINIMIZE_H_
#define DPKIT_MINIMIZE_H_

#include <functional>
#include <optional>

#include <Eigen/Dense>

namespace dpkit {

// Feasible set of a minimization: all of R^p, or the l2 ball of a radius.
class Domain {
 public:
  static Domain Unconstrained() { return Domain(std::nullopt); }
  // Requires radius > 0.
  static Domain Ball(double radius);

  const std::optional<double>& radius() const { return radius_; }

  // θ · min(1, r / ‖θ‖₂), or θ itself when unconstrained.
  Eigen::VectorXd Project(const Eigen::VectorXd& theta) const;

 private:
  explicit Domain(std::optional<double> radius) : radius_(radius) {}

  std::optional<double> radius_;
};

struct MinimizeOptions {
  // Stop once ‖P(x - ∇f(x)) - x‖₂ ≤ tol.
  double tol = 1e-8;
  int max_iters = 10000;
  // Number of curvature pairs kept by the quasi-Newton model.
  int memory = 10;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double projected_gradient_norm = 0.0;
  int iterations = 0;
  // False when max_iters was reached or no further decrease was possible
  // before the tolerance was met.
  bool converged = false;
};

// Returns f(x) and, when `grad` is non-null, writes ∇f(x) into it.
using Objective = std::function<double(const Eigen::VectorXd& x,
                                       Eigen::VectorXd* grad)>;

// L-BFGS with Armijo backtracking. On a ball, if the unconstrained minimizer
// lies outside, solves for the Lagrange multiplier of the norm constraint;
// this assumes f is convex.
// Throws InvalidArgumentError if f(x0) is not finite.
MinimizeResult Minimize(const Objective& f, const Eigen::VectorXd& x0,
                        const Domain& domain,
                        const MinimizeOptions& options = {});

}  // namespace dpkit

#endif  // DPKIT_MINIMIZE_H_
