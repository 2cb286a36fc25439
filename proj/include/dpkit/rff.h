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

#ifndef DPKIT_RFF_H_
#define DPKIT_RFF_H_

#include <cstdint>

#include <Eigen/Dense>

namespace dpkit {

// Random Fourier features for the Gaussian kernel k(x, x') =
// exp(-β‖x - x'‖²).
//
// Frequencies ω_j ~ N(0, 2β I) and phases ψ_j ~ U[0, 2π] are derived from
// `seed` alone, so the projection can be released and rebuilt. The features
// v_j(x) = D^{-1/2} cos(ω_jᵀx + ψ_j) have ‖v(x)‖₂ ≤ 1 for every x, and
// v(x)ᵀv(x') estimates k(x, x') / 2.
class RffProjection {
 public:
  // Requires D > 0, input_dim > 0 and beta > 0.
  RffProjection(Eigen::Index D, Eigen::Index input_dim, double beta,
                uint64_t seed);

  Eigen::VectorXd Transform(const Eigen::VectorXd& x) const;
  // Row-wise Transform.
  Eigen::MatrixXd TransformRows(const Eigen::MatrixXd& X) const;

  Eigen::Index dimension() const { return frequencies_.rows(); }
  Eigen::Index input_dim() const { return frequencies_.cols(); }
  double beta() const { return beta_; }
  uint64_t seed() const { return seed_; }
  // D x input_dim; row j is ω_j.
  const Eigen::MatrixXd& frequencies() const { return frequencies_; }
  const Eigen::VectorXd& phases() const { return phases_; }

 private:
  double beta_;
  uint64_t seed_;
  Eigen::MatrixXd frequencies_;
  Eigen::VectorXd phases_;
};

}  // namespace dpkit

#endif  // DPKIT_RFF_H_
