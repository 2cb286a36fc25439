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
#include <limits>

#include "dpkit/errors.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"

namespace dpkit {
namespace {

// ½ (x - c)ᵀ A (x - c) with a badly scaled diagonal A.
Objective Quadratic(const Eigen::VectorXd& c, const Eigen::VectorXd& diag) {
  return [c, diag](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const Eigen::VectorXd d = x - c;
    if (grad) *grad = diag.cwiseProduct(d);
    return 0.5 * d.dot(diag.cwiseProduct(d));
  };
}

TEST(DomainTest, ProjectsOntoBall) {
  const Domain ball = Domain::Ball(2);
  Eigen::VectorXd v(2);
  v << 3, 4;
  EXPECT_NEAR(ball.Project(v).norm(), 2.0, 1e-15);
  EXPECT_NEAR(ball.Project(v)(0) / ball.Project(v)(1), 0.75, 1e-15);
  Eigen::VectorXd inside(2);
  inside << 0.1, 0.2;
  EXPECT_EQ(ball.Project(inside), inside);
  EXPECT_EQ(Domain::Unconstrained().Project(v), v);
  EXPECT_THROW(Domain::Ball(0), InvalidArgumentError);
}

TEST(MinimizeTest, SolvesIllConditionedQuadratic) {
  Eigen::VectorXd c(4), diag(4);
  c << 1, -2, 3, 0.5;
  diag << 1, 100, 0.01, 10;
  const MinimizeResult r =
      Minimize(Quadratic(c, diag), Eigen::VectorXd::Zero(4),
               Domain::Unconstrained());
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.projected_gradient_norm, 1e-8);
  EXPECT_NEAR((r.x - c).norm(), 0.0, 1e-5);
}

TEST(MinimizeTest, BallConstrainedQuadraticLandsOnBoundary) {
  // Isotropic quadratic: the constrained optimum is the projection of c.
  Eigen::VectorXd c(3);
  c << 3, 0, 4;
  const MinimizeResult r =
      Minimize(Quadratic(c, Eigen::VectorXd::Ones(3)), Eigen::VectorXd::Zero(3),
               Domain::Ball(1));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x.norm(), 1.0, 1e-12);
  EXPECT_NEAR((r.x - c / 5).norm(), 0.0, 1e-8);
}

TEST(MinimizeTest, MatchesConstrainedRidgeOracle) {
  Eigen::MatrixXd X(6, 2);
  X << 1, 0.2, -0.5, 1, 0.3, 0.3, 0.9, -0.7, -0.2, 0.4, 0.6, 0.1;
  Eigen::VectorXd y(6);
  y << 2, 1, -1, 3, 0.5, 2;
  const double ridge = 0.3;
  for (double radius : {0.5, 10.0}) {
    const Objective f = [&](const Eigen::VectorXd& t, Eigen::VectorXd* g) {
      const Eigen::VectorXd r = X * t - y;
      const double n = X.rows();
      if (g) *g = (X.transpose() * r + ridge * t) / n;
      return (r.squaredNorm() + ridge * t.squaredNorm()) / (2 * n);
    };
    const MinimizeResult r =
        Minimize(f, Eigen::VectorXd::Zero(2), Domain::Ball(radius));
    const Eigen::VectorXd oracle =
        testing::ConstrainedRidge(X, y, ridge, radius);
    EXPECT_NEAR((r.x - oracle).norm(), 0.0, 1e-6) << "radius " << radius;
  }
}

TEST(MinimizeTest, LogisticTwoDimensionsMatchesGridSearch) {
  Eigen::MatrixXd X(5, 2);
  X << 0.3, 0.1, -0.4, 0.2, 0.5, -0.5, -0.1, -0.3, 0.2, 0.6;
  Eigen::VectorXd y(5);
  y << 1, -1, 1, -1, 1;
  const double gamma = 0.5;
  const auto value = [&](const Eigen::VectorXd& t) {
    double s = 0.0;
    for (int i = 0; i < X.rows(); ++i) {
      s += std::log1p(std::exp(-y(i) * X.row(i).dot(t)));
    }
    return s / X.rows() + gamma / (2 * X.rows()) * t.squaredNorm();
  };
  const Objective f = [&](const Eigen::VectorXd& t, Eigen::VectorXd* g) {
    if (g) {
      g->setZero(2);
      for (int i = 0; i < X.rows(); ++i) {
        const double m = y(i) * X.row(i).dot(t);
        *g -= y(i) / (1 + std::exp(m)) * X.row(i).transpose();
      }
      *g = *g / X.rows() + gamma / X.rows() * t;
    }
    return value(t);
  };
  const MinimizeResult r =
      Minimize(f, Eigen::VectorXd::Zero(2), Domain::Unconstrained());
  const Eigen::Vector2d grid = testing::GridMinimize2d(
      [&](double a, double b) { return value(Eigen::Vector2d(a, b)); }, -10,
      10);
  EXPECT_NEAR((r.x - grid).norm(), 0.0, 1e-4);
}

TEST(MinimizeTest, ReportsNonConvergenceAtIterationCap) {
  Eigen::VectorXd c(2), diag(2);
  c << 5, 5;
  diag << 1, 1000;
  MinimizeOptions opts;
  opts.max_iters = 1;
  const MinimizeResult r =
      Minimize(Quadratic(c, diag), Eigen::VectorXd::Zero(2),
               Domain::Unconstrained(), opts);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.iterations, 1);
}

TEST(MinimizeTest, RejectsNonFiniteStart) {
  const Objective f = [](const Eigen::VectorXd&, Eigen::VectorXd* g) {
    if (g) g->setZero(1);
    return std::numeric_limits<double>::quiet_NaN();
  };
  EXPECT_THROW(Minimize(f, Eigen::VectorXd::Zero(1), Domain::Unconstrained()),
               InvalidArgumentError);
}

}  // namespace
}  // namespace dpkit
