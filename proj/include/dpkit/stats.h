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

#ifndef DPKIT_STATS_H_
#define DPKIT_STATS_H_

#include <span>
#include <string>
#include <vector>

#include "dpkit/bounds.h"
#include "dpkit/mechanisms.h"
#include "dpkit/random.h"

namespace dpkit {

// A data vector whose entries all lie within its bounds. Only Clip() makes
// one, so holding a ClippedVector is proof the clipping happened.
class ClippedVector {
 public:
  const std::vector<double>& values() const { return values_; }
  const Bounds& bounds() const { return bounds_; }
  size_t size() const { return values_.size(); }

 private:
  friend ClippedVector Clip(std::span<const double> x, const Bounds& bounds);
  ClippedVector(std::vector<double> values, Bounds bounds)
      : values_(std::move(values)), bounds_(bounds) {}

  std::vector<double> values_;
  Bounds bounds_;
};

// Componentwise min(max(x_i, lower), upper). Throws on empty input.
ClippedVector Clip(std::span<const double> x, const Bounds& bounds);

enum class MechanismKind { kLaplace, kGaussian };
enum class NeighborChoice { kBounded, kUnbounded, kBoth };

std::string ToString(MechanismKind mechanism);

struct StatRequest {
  PrivacyBudget budget = PrivacyBudget::Pure(1.0);
  MechanismKind mechanism = MechanismKind::kLaplace;
  NeighborChoice neighbor = NeighborChoice::kBounded;

  // Laplace needs a pure budget, Gaussian needs delta > 0.
  void Validate() const;
  // One model for bounded/unbounded, both (bounded first) for kBoth.
  std::vector<NeighborModel> NeighborModels() const;
};

// One privatized scalar plus what was spent to get it.
struct ScalarRelease {
  std::string statistic;
  double value = 0.0;
  double sensitivity = 0.0;
  NeighborModel neighbor = NeighborModel::kBounded;
  MechanismKind mechanism = MechanismKind::kLaplace;
};

// Global sensitivities. The same value serves bounded and unbounded
// neighbors for the moment statistics.
double MeanSensitivity(const Bounds& bounds, size_t n);
double VarianceSensitivity(const Bounds& bounds, size_t n);
double CovarianceSensitivity(const Bounds& bounds1, const Bounds& bounds2,
                             size_t n);
// `group_sizes` are the per-group counts; with `approx_n_max` the total N
// replaces the largest group size.
double PooledVarianceSensitivity(const Bounds& bounds,
                                 std::span<const size_t> group_sizes,
                                 bool approx_n_max);
double PooledCovarianceSensitivity(const Bounds& bounds1, const Bounds& bounds2,
                                   std::span<const size_t> group_sizes,
                                   bool approx_n_max);
// Histogram / contingency-table counts: l1 is 2 (bounded) or 1 (unbounded),
// l2 is sqrt(2) or 1.
double CountSensitivity(Norm norm, NeighborModel neighbor);

// Each *Dp function returns one release per neighbor model requested; with
// NeighborChoice::kBoth each release spends the full budget.
std::vector<ScalarRelease> MeanDp(std::span<const double> x,
                                  const Bounds& bounds, const StatRequest& req,
                                  RandomSource& rng);
// Sample variance (n - 1 denominator). Requires n >= 2.
std::vector<ScalarRelease> VarDp(std::span<const double> x,
                                 const Bounds& bounds, const StatRequest& req,
                                 RandomSource& rng);
// sqrt of one privatized variance, floored at 0 first.
std::vector<ScalarRelease> SdDp(std::span<const double> x,
                                const Bounds& bounds, const StatRequest& req,
                                RandomSource& rng);
std::vector<ScalarRelease> CovDp(std::span<const double> x1,
                                 std::span<const double> x2,
                                 const Bounds& bounds1, const Bounds& bounds2,
                                 const StatRequest& req, RandomSource& rng);

// Groups of one variable, clipped on construction.
class GroupCollection {
 public:
  // Requires at least two groups of size >= 2 each.
  GroupCollection(const std::vector<std::vector<double>>& groups,
                  const Bounds& bounds, bool approx_n_max);

  const std::vector<ClippedVector>& groups() const { return groups_; }
  std::vector<size_t> sizes() const;
  size_t n_max() const;
  bool approx_n_max() const { return approx_n_max_; }

 private:
  std::vector<ClippedVector> groups_;
  bool approx_n_max_;
};

// Σ_j (n_j - 1) s_j² / (N - k).
std::vector<ScalarRelease> PooledVarDp(const GroupCollection& groups,
                                       const StatRequest& req,
                                       RandomSource& rng);

// One two-column group for pooled covariance.
struct PairedGroup {
  std::vector<double> x1;
  std::vector<double> x2;
};

std::vector<ScalarRelease> PooledCovDp(const std::vector<PairedGroup>& groups,
                                       const Bounds& bounds1,
                                       const Bounds& bounds2, bool approx_n_max,
                                       const StatRequest& req,
                                       RandomSource& rng);

// Bin edges plus output options for histograms.
struct HistogramSpec {
  std::vector<double> edges;
  bool normalize = false;
  bool allow_negative = false;

  static HistogramSpec FromEdges(std::vector<double> edges);
  // `bins` equal-width bins spanning `bounds`.
  static HistogramSpec FromBinCount(size_t bins, const Bounds& bounds);

  // At least two strictly ascending finite edges.
  void Validate() const;
};

// Counts per bin, [a, b) except the last bin which is closed. Values outside
// the edges land in the end bins.
std::vector<double> HistogramCounts(std::span<const double> x,
                                    std::span<const double> edges);

struct HistogramRelease {
  std::vector<double> edges;
  // Noisy counts, or densities (area 1) when normalized.
  std::vector<double> values;
  bool normalized = false;
  double sensitivity = 0.0;
  NeighborModel neighbor = NeighborModel::kBounded;
  MechanismKind mechanism = MechanismKind::kLaplace;
};

// Negative noisy counts are floored at 0 unless spec.allow_negative; when
// normalizing, values become count / (total · width) after flooring (all-zero
// counts are left as zeros).
std::vector<HistogramRelease> HistogramDp(std::span<const double> x,
                                          const HistogramSpec& spec,
                                          const StatRequest& req,
                                          RandomSource& rng);

// A categorical variable with its declared levels.
struct Factor {
  std::string name;
  std::vector<std::string> levels;
  std::vector<std::string> values;
};

struct TableRelease {
  std::vector<std::string> factor_names;
  std::vector<std::vector<std::string>> levels;
  // Row-major over the factors, the last factor varying fastest.
  std::vector<double> counts;
  double sensitivity = 0.0;
  NeighborModel neighbor = NeighborModel::kBounded;
  MechanismKind mechanism = MechanismKind::kLaplace;
};

// Exact cross-tabulation in the layout of TableRelease::counts.
std::vector<double> CrossTabulate(const std::vector<Factor>& factors);

std::vector<TableRelease> TableDp(const std::vector<Factor>& factors,
                                  const StatRequest& req, bool allow_negative,
                                  RandomSource& rng);

// Sensitivity of the quantile utility, identical for both neighbor models.
inline constexpr double kQuantileUtilitySensitivity = 1.0;

// The exponential-mechanism candidates for a private quantile: with sorted,
// clipped data z_1..z_n and z_0 = lower, z_{n+1} = upper, interval i is
// [z_i, z_{i+1}] (i = 0..n) with utility -|i - q n| and measure z_{i+1} - z_i.
struct QuantileCandidates {
  std::vector<double> left;
  std::vector<double> right;
  std::vector<double> utility;
  std::vector<double> measure;
};

QuantileCandidates MakeQuantileCandidates(std::span<const double> x, double q,
                                          const Bounds& bounds);

// Smith-style private quantile. With `uniform_sampling` the release is a
// uniform draw from the selected interval, otherwise its left endpoint.
// If every interval has zero length, selection ignores the measure.
double QuantileDp(std::span<const double> x, double q,
                  const PrivacyBudget& budget, const Bounds& bounds,
                  bool uniform_sampling, RandomSource& rng);

inline double MedianDp(std::span<const double> x, const PrivacyBudget& budget,
                       const Bounds& bounds, bool uniform_sampling,
                       RandomSource& rng) {
  return QuantileDp(x, 0.5, budget, bounds, uniform_sampling, rng);
}

}  // namespace dpkit

#endif  // DPKIT_STATS_H_
