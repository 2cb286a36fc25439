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

#include "dpkit/minimize.h"

#include <cmath>
#include <deque>

#include "dpkit/errors.h"

namespace dpkit {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

// Two-loop recursion: returns -H g.
Eigen::VectorXd QuasiNewtonDirection(const std::deque<CurvaturePair>& pairs,
                                     const Eigen::VectorXd& g) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(pairs.size());
  for (size_t k = pairs.size(); k-- > 0;) {
    alpha[k] = pairs[k].rho * pairs[k].s.dot(q);
    q -= alpha[k] * pairs[k].y;
  }
  if (!pairs.empty()) {
    const CurvaturePair& last = pairs.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (size_t k = 0; k < pairs.size(); ++k) {
    const double beta = pairs[k].rho * pairs[k].y.dot(q);
    q += (alpha[k] - beta) * pairs[k].s;
  }
  return -q;
}

struct Step {
  Eigen::VectorXd x;
  Eigen::VectorXd g;
  double f;
};

}  // namespace

Domain Domain::Ball(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgumentError("domain radius must be positive and finite");
  }
  return Domain(radius);
}

Eigen::VectorXd Domain::Project(const Eigen::VectorXd& theta) const {
  if (!radius_) return theta;
  const double norm = theta.norm();
  if (norm <= *radius_) return theta;
  return theta * (*radius_ / norm);
}

namespace {

// L-BFGS with Armijo backtracking, falling back to a steepest-descent step
// whenever the quasi-Newton direction fails.
MinimizeResult MinimizeUnconstrained(const Objective& f,
                                     const Eigen::VectorXd& x0,
                                     const MinimizeOptions& options) {
  const Eigen::Index p = x0.size();
  Eigen::VectorXd x = x0;
  Eigen::VectorXd g(p);
  double fx = f(x, &g);
  if (!std::isfinite(fx) || !g.allFinite()) {
    throw InvalidArgumentError("objective is not finite at the starting point");
  }

  // Returns false if no step decreased f, allowing for round-off at the
  // noise floor.
  auto search = [&](const Eigen::VectorXd& d, double t0, Step* out) {
    const double gnorm_now = g.norm();
    const double slope = g.dot(d);
    double t = t0;
    Eigen::VectorXd gn(p);
    for (int k = 0; k < kMaxBacktracks; ++k, t *= 0.5) {
      Eigen::VectorXd xn = x + t * d;
      const double fn = f(xn, &gn);
      if (!std::isfinite(fn)) continue;
      if (fn <= fx + kArmijo * t * slope ||
          (fn <= fx + 1e-14 * std::max(1.0, std::abs(fx)) &&
           gn.norm() < gnorm_now)) {
        *out = Step{std::move(xn), gn, fn};
        return true;
      }
    }
    return false;
  };

  std::deque<CurvaturePair> pairs;
  double gnorm = g.norm();
  int iter = 0;
  while (gnorm > options.tol && iter < options.max_iters) {
    ++iter;
    Step step;
    bool moved = false;
    if (!pairs.empty()) {
      const Eigen::VectorXd d = QuasiNewtonDirection(pairs, g);
      if (g.dot(d) < 0.0) moved = search(d, 1.0, &step);
    }
    if (!moved) {
      pairs.clear();
      moved = search(-g, gnorm > 1.0 ? 1.0 / gnorm : 1.0, &step);
    }
    if (!moved) break;

    Eigen::VectorXd s = step.x - x;
    Eigen::VectorXd y = step.g - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      pairs.push_back(CurvaturePair{std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(pairs.size()) > options.memory) pairs.pop_front();
    }
    x = std::move(step.x);
    g = std::move(step.g);
    fx = step.f;
    gnorm = g.norm();
  }

  MinimizeResult result;
  result.x = std::move(x);
  result.value = fx;
  result.projected_gradient_norm = gnorm;
  result.iterations = iter;
  result.converged = gnorm <= options.tol;
  return result;
}

}  // namespace

MinimizeResult Minimize(const Objective& f, const Eigen::VectorXd& x0,
                        const Domain& domain, const MinimizeOptions& options) {
  MinimizeResult inner =
      MinimizeUnconstrained(f, domain.Project(x0), options);
  if (!domain.radius() || inner.x.norm() <= *domain.radius()) return inner;

  // The unconstrained minimizer lies outside the ball, so (for convex f) the
  // solution is on the sphere where ∇f(θ) + μθ = 0 for some μ > 0. θ(μ), the
  // minimizer of f + (μ/2)‖θ‖², shrinks monotonically in μ; find the μ with
  // ‖θ(μ)‖ = r by regula falsi on 1/‖θ(μ)‖ - 1/r, which is close to linear.
  const double r = *domain.radius();
  int iterations = inner.iterations;
  auto solve = [&](double mu, const Eigen::VectorXd& start) {
    const Objective penalized = [&f, mu](const Eigen::VectorXd& x,
                                         Eigen::VectorXd* grad) {
      const double v = f(x, grad);
      if (grad != nullptr) *grad += mu * x;
      return v + 0.5 * mu * x.squaredNorm();
    };
    MinimizeResult res = MinimizeUnconstrained(penalized, start, options);
    iterations += res.iterations;
    return res;
  };
  auto phi = [r](const Eigen::VectorXd& x) { return 1.0 / x.norm() - 1.0 / r; };

  double mu_lo = 0.0;
  double phi_lo = phi(inner.x);
  double mu_hi = 1.0;
  MinimizeResult hi = solve(mu_hi, domain.Project(inner.x));
  while (phi(hi.x) < 0.0 && mu_hi < 1e300) {
    mu_lo = mu_hi;
    phi_lo = phi(hi.x);
    mu_hi *= 4.0;
    hi = solve(mu_hi, domain.Project(hi.x));
  }
  double phi_hi = phi(hi.x);
  MinimizeResult best = hi;
  int stale_side = 0;
  for (int k = 0; k < 200 && std::abs(best.x.norm() - r) > 1e-12 * r; ++k) {
    double mu = mu_hi - phi_hi * (mu_hi - mu_lo) / (phi_hi - phi_lo);
    if (!(mu > mu_lo && mu < mu_hi)) mu = 0.5 * (mu_lo + mu_hi);
    if (mu_hi - mu_lo <= 1e-15 * mu_hi) break;
    best = solve(mu, domain.Project(best.x));
    const double phi_mid = phi(best.x);
    // Illinois modification: halve the stale endpoint's weight.
    if (phi_mid < 0.0) {
      mu_lo = mu;
      phi_lo = phi_mid;
      if (stale_side == -1) phi_hi *= 0.5;
      stale_side = -1;
    } else {
      mu_hi = mu;
      phi_hi = phi_mid;
      if (stale_side == 1) phi_lo *= 0.5;
      stale_side = 1;
    }
  }

  MinimizeResult result;
  result.x = domain.Project(best.x);
  Eigen::VectorXd g(result.x.size());
  result.value = f(result.x, &g);
  result.projected_gradient_norm = (domain.Project(result.x - g) - result.x).norm();
  result.iterations = iterations;
  result.converged =
      best.converged && result.projected_gradient_norm <= options.tol;
  return result;
}

}  // namespace dpkit
