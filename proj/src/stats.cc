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

#include "dpkit/stats.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "dpkit/errors.h"

namespace dpkit {
namespace {

double Mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Sum of cross-deviations Σ (x_i - x̄)(y_i - ȳ).
double CrossDeviation(std::span<const double> x, std::span<const double> y) {
  const double mx = Mean(x);
  const double my = Mean(y);
  double sum = 0.0;
  for (size_t i = 0; i < x.size(); ++i) sum += (x[i] - mx) * (y[i] - my);
  return sum;
}

double ReleaseScalar(double value, double sensitivity, NeighborModel neighbor,
                     const StatRequest& req, RandomSource& rng) {
  const double values[] = {value};
  if (req.mechanism == MechanismKind::kLaplace) {
    SensitivitySpec sens{Norm::kL1, {sensitivity}, neighbor};
    return LaplaceMechanism(values, req.budget, sens, std::nullopt, rng)[0];
  }
  SensitivitySpec sens{Norm::kL2, {sensitivity}, neighbor};
  return GaussianMechanism(values, req.budget, sens, std::nullopt, rng)[0];
}

std::vector<ScalarRelease> ReleaseAll(const std::string& statistic,
                                      double value, double sensitivity,
                                      const StatRequest& req,
                                      RandomSource& rng) {
  std::vector<ScalarRelease> out;
  for (NeighborModel neighbor : req.NeighborModels()) {
    ScalarRelease r;
    r.statistic = statistic;
    r.value = ReleaseScalar(value, sensitivity, neighbor, req, rng);
    r.sensitivity = sensitivity;
    r.neighbor = neighbor;
    r.mechanism = req.mechanism;
    out.push_back(r);
  }
  return out;
}

void RequireSize(size_t n, size_t minimum, const char* statistic) {
  if (n < minimum) {
    std::ostringstream msg;
    msg << statistic << " needs at least " << minimum << " observations, got "
        << n;
    throw DataError(msg.str());
  }
}

size_t Total(std::span<const size_t> sizes) {
  return std::accumulate(sizes.begin(), sizes.end(), size_t{0});
}

// (n_max - 1) / (n_max (N - k)), the pooled factor shared by var and cov.
double PooledFactor(std::span<const size_t> sizes, bool approx_n_max) {
  if (sizes.size() < 2) throw DataError("pooled statistics need >= 2 groups");
  for (size_t s : sizes) RequireSize(s, 2, "each pooled group");
  const size_t total = Total(sizes);
  const double n_max = approx_n_max
                           ? static_cast<double>(total)
                           : static_cast<double>(
                                 *std::max_element(sizes.begin(), sizes.end()));
  const double dof = static_cast<double>(total - sizes.size());
  return (n_max - 1.0) / (n_max * dof);
}

}  // namespace

ClippedVector Clip(std::span<const double> x, const Bounds& bounds) {
  bounds.Validate();
  if (x.empty()) throw DataError("cannot clip an empty vector");
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i])) throw DataError("data contains NaN");
    out[i] = std::min(std::max(x[i], bounds.lower), bounds.upper);
  }
  return ClippedVector(std::move(out), bounds);
}

std::string ToString(MechanismKind mechanism) {
  return mechanism == MechanismKind::kLaplace ? "laplace" : "gaussian";
}

void StatRequest::Validate() const {
  if (mechanism == MechanismKind::kLaplace &&
      budget.variant() != DpVariant::kPure) {
    throw InvalidArgumentError("the Laplace mechanism needs a pure budget");
  }
  if (mechanism == MechanismKind::kGaussian &&
      budget.variant() == DpVariant::kPure) {
    throw InvalidArgumentError("the Gaussian mechanism needs delta > 0");
  }
}

std::vector<NeighborModel> StatRequest::NeighborModels() const {
  switch (neighbor) {
    case NeighborChoice::kBounded:
      return {NeighborModel::kBounded};
    case NeighborChoice::kUnbounded:
      return {NeighborModel::kUnbounded};
    case NeighborChoice::kBoth:
      return {NeighborModel::kBounded, NeighborModel::kUnbounded};
  }
  return {};
}

double MeanSensitivity(const Bounds& bounds, size_t n) {
  bounds.Validate();
  RequireSize(n, 1, "mean");
  return bounds.Width() / static_cast<double>(n);
}

double VarianceSensitivity(const Bounds& bounds, size_t n) {
  bounds.Validate();
  RequireSize(n, 2, "variance");
  return bounds.Width() * bounds.Width() / static_cast<double>(n);
}

double CovarianceSensitivity(const Bounds& bounds1, const Bounds& bounds2,
                             size_t n) {
  bounds1.Validate();
  bounds2.Validate();
  RequireSize(n, 2, "covariance");
  return bounds1.Width() * bounds2.Width() / static_cast<double>(n);
}

double PooledVarianceSensitivity(const Bounds& bounds,
                                 std::span<const size_t> group_sizes,
                                 bool approx_n_max) {
  bounds.Validate();
  return bounds.Width() * bounds.Width() *
         PooledFactor(group_sizes, approx_n_max);
}

double PooledCovarianceSensitivity(const Bounds& bounds1, const Bounds& bounds2,
                                   std::span<const size_t> group_sizes,
                                   bool approx_n_max) {
  bounds1.Validate();
  bounds2.Validate();
  return bounds1.Width() * bounds2.Width() *
         PooledFactor(group_sizes, approx_n_max);
}

double CountSensitivity(Norm norm, NeighborModel neighbor) {
  if (neighbor == NeighborModel::kUnbounded) return 1.0;
  return norm == Norm::kL1 ? 2.0 : std::sqrt(2.0);
}

std::vector<ScalarRelease> MeanDp(std::span<const double> x,
                                  const Bounds& bounds, const StatRequest& req,
                                  RandomSource& rng) {
  req.Validate();
  const ClippedVector clipped = Clip(x, bounds);
  return ReleaseAll("mean", Mean(clipped.values()),
                    MeanSensitivity(bounds, clipped.size()), req, rng);
}

std::vector<ScalarRelease> VarDp(std::span<const double> x,
                                 const Bounds& bounds, const StatRequest& req,
                                 RandomSource& rng) {
  req.Validate();
  RequireSize(x.size(), 2, "variance");
  const ClippedVector clipped = Clip(x, bounds);
  const auto& v = clipped.values();
  const double variance =
      CrossDeviation(v, v) / static_cast<double>(v.size() - 1);
  return ReleaseAll("var", variance, VarianceSensitivity(bounds, v.size()), req,
                    rng);
}

std::vector<ScalarRelease> SdDp(std::span<const double> x,
                                const Bounds& bounds, const StatRequest& req,
                                RandomSource& rng) {
  std::vector<ScalarRelease> releases = VarDp(x, bounds, req, rng);
  for (ScalarRelease& r : releases) {
    r.statistic = "sd";
    r.value = std::sqrt(std::max(0.0, r.value));
  }
  return releases;
}

std::vector<ScalarRelease> CovDp(std::span<const double> x1,
                                 std::span<const double> x2,
                                 const Bounds& bounds1, const Bounds& bounds2,
                                 const StatRequest& req, RandomSource& rng) {
  req.Validate();
  if (x1.size() != x2.size()) {
    throw DataError("covariance inputs have different lengths");
  }
  RequireSize(x1.size(), 2, "covariance");
  const ClippedVector c1 = Clip(x1, bounds1);
  const ClippedVector c2 = Clip(x2, bounds2);
  const double cov = CrossDeviation(c1.values(), c2.values()) /
                     static_cast<double>(x1.size() - 1);
  return ReleaseAll("cov", cov,
                    CovarianceSensitivity(bounds1, bounds2, x1.size()), req,
                    rng);
}

GroupCollection::GroupCollection(const std::vector<std::vector<double>>& groups,
                                 const Bounds& bounds, bool approx_n_max)
    : approx_n_max_(approx_n_max) {
  if (groups.size() < 2) throw DataError("pooled statistics need >= 2 groups");
  for (const auto& g : groups) {
    RequireSize(g.size(), 2, "each pooled group");
    groups_.push_back(Clip(g, bounds));
  }
}

std::vector<size_t> GroupCollection::sizes() const {
  std::vector<size_t> out;
  for (const ClippedVector& g : groups_) out.push_back(g.size());
  return out;
}

size_t GroupCollection::n_max() const {
  const std::vector<size_t> s = sizes();
  return approx_n_max_ ? Total(s) : *std::max_element(s.begin(), s.end());
}

std::vector<ScalarRelease> PooledVarDp(const GroupCollection& groups,
                                       const StatRequest& req,
                                       RandomSource& rng) {
  req.Validate();
  const std::vector<size_t> sizes = groups.sizes();
  double sum_sq = 0.0;
  for (const ClippedVector& g : groups.groups()) {
    sum_sq += CrossDeviation(g.values(), g.values());
  }
  const double pooled =
      sum_sq / static_cast<double>(Total(sizes) - sizes.size());
  const Bounds& bounds = groups.groups().front().bounds();
  return ReleaseAll(
      "pooled-var", pooled,
      PooledVarianceSensitivity(bounds, sizes, groups.approx_n_max()), req,
      rng);
}

std::vector<ScalarRelease> PooledCovDp(const std::vector<PairedGroup>& groups,
                                       const Bounds& bounds1,
                                       const Bounds& bounds2, bool approx_n_max,
                                       const StatRequest& req,
                                       RandomSource& rng) {
  req.Validate();
  if (groups.size() < 2) throw DataError("pooled statistics need >= 2 groups");
  std::vector<size_t> sizes;
  double sum_cross = 0.0;
  for (const PairedGroup& g : groups) {
    if (g.x1.size() != g.x2.size()) {
      throw DataError("pooled covariance group has columns of unequal length");
    }
    RequireSize(g.x1.size(), 2, "each pooled group");
    const ClippedVector c1 = Clip(g.x1, bounds1);
    const ClippedVector c2 = Clip(g.x2, bounds2);
    sum_cross += CrossDeviation(c1.values(), c2.values());
    sizes.push_back(g.x1.size());
  }
  const double pooled =
      sum_cross / static_cast<double>(Total(sizes) - sizes.size());
  return ReleaseAll(
      "pooled-cov", pooled,
      PooledCovarianceSensitivity(bounds1, bounds2, sizes, approx_n_max), req,
      rng);
}

HistogramSpec HistogramSpec::FromEdges(std::vector<double> edges) {
  HistogramSpec spec;
  spec.edges = std::move(edges);
  spec.Validate();
  return spec;
}

HistogramSpec HistogramSpec::FromBinCount(size_t bins, const Bounds& bounds) {
  bounds.Validate();
  if (bins == 0) throw InvalidArgumentError("histogram needs at least one bin");
  HistogramSpec spec;
  spec.edges.resize(bins + 1);
  for (size_t i = 0; i <= bins; ++i) {
    spec.edges[i] = bounds.lower + bounds.Width() * static_cast<double>(i) /
                                       static_cast<double>(bins);
  }
  spec.edges.back() = bounds.upper;
  return spec;
}

void HistogramSpec::Validate() const {
  if (edges.size() < 2) {
    throw InvalidArgumentError("histogram needs at least two edges");
  }
  for (size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i])) {
      throw InvalidArgumentError("histogram edges must be finite");
    }
    if (i > 0 && !(edges[i] > edges[i - 1])) {
      throw InvalidArgumentError("histogram edges must be strictly ascending");
    }
  }
}

std::vector<double> HistogramCounts(std::span<const double> x,
                                    std::span<const double> edges) {
  const size_t bins = edges.size() - 1;
  std::vector<double> counts(bins, 0.0);
  for (double v : x) {
    if (std::isnan(v)) throw DataError("data contains NaN");
    // First edge strictly greater than v, minus one, gives [a, b) bins.
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    size_t bin = it == edges.begin() ? 0 : static_cast<size_t>(it - edges.begin()) - 1;
    bin = std::min(bin, bins - 1);
    counts[bin] += 1.0;
  }
  return counts;
}

std::vector<HistogramRelease> HistogramDp(std::span<const double> x,
                                          const HistogramSpec& spec,
                                          const StatRequest& req,
                                          RandomSource& rng) {
  req.Validate();
  spec.Validate();
  const std::vector<double> counts = HistogramCounts(x, spec.edges);
  std::vector<HistogramRelease> out;
  for (NeighborModel neighbor : req.NeighborModels()) {
    HistogramRelease r;
    r.edges = spec.edges;
    r.neighbor = neighbor;
    r.mechanism = req.mechanism;
    if (req.mechanism == MechanismKind::kLaplace) {
      r.sensitivity = CountSensitivity(Norm::kL1, neighbor);
      r.values = AddLaplaceNoise(counts, r.sensitivity / req.budget.epsilon(), rng);
    } else {
      r.sensitivity = CountSensitivity(Norm::kL2, neighbor);
      r.values = AddGaussianNoise(counts, GaussianSigma(req.budget, r.sensitivity), rng);
    }
    if (!spec.allow_negative) {
      for (double& v : r.values) v = std::max(0.0, v);
    }
    if (spec.normalize) {
      const double total = std::accumulate(r.values.begin(), r.values.end(), 0.0);
      if (total > 0.0) {
        for (size_t i = 0; i < r.values.size(); ++i) {
          r.values[i] /= total * (spec.edges[i + 1] - spec.edges[i]);
        }
      }
      r.normalized = true;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> CrossTabulate(const std::vector<Factor>& factors) {
  if (factors.empty()) throw InvalidArgumentError("table needs >= 1 factor");
  const size_t n = factors.front().values.size();
  size_t cells = 1;
  std::vector<std::map<std::string, size_t>> index(factors.size());
  for (size_t f = 0; f < factors.size(); ++f) {
    const Factor& factor = factors[f];
    if (factor.values.size() != n) {
      throw DataError("table factors have different lengths");
    }
    if (factor.levels.empty()) {
      throw InvalidArgumentError("factor '" + factor.name + "' has no levels");
    }
    for (size_t l = 0; l < factor.levels.size(); ++l) {
      if (!index[f].emplace(factor.levels[l], l).second) {
        throw InvalidArgumentError("factor '" + factor.name +
                                   "' repeats level '" + factor.levels[l] + "'");
      }
    }
    cells *= factor.levels.size();
  }
  std::vector<double> counts(cells, 0.0);
  for (size_t row = 0; row < n; ++row) {
    size_t cell = 0;
    for (size_t f = 0; f < factors.size(); ++f) {
      auto it = index[f].find(factors[f].values[row]);
      if (it == index[f].end()) {
        throw DataError("unknown level '" + factors[f].values[row] +
                        "' for factor '" + factors[f].name + "'");
      }
      cell = cell * factors[f].levels.size() + it->second;
    }
    counts[cell] += 1.0;
  }
  return counts;
}

std::vector<TableRelease> TableDp(const std::vector<Factor>& factors,
                                  const StatRequest& req, bool allow_negative,
                                  RandomSource& rng) {
  req.Validate();
  const std::vector<double> counts = CrossTabulate(factors);
  std::vector<TableRelease> out;
  for (NeighborModel neighbor : req.NeighborModels()) {
    TableRelease r;
    for (const Factor& f : factors) {
      r.factor_names.push_back(f.name);
      r.levels.push_back(f.levels);
    }
    r.neighbor = neighbor;
    r.mechanism = req.mechanism;
    if (req.mechanism == MechanismKind::kLaplace) {
      r.sensitivity = CountSensitivity(Norm::kL1, neighbor);
      r.counts = AddLaplaceNoise(counts, r.sensitivity / req.budget.epsilon(), rng);
    } else {
      r.sensitivity = CountSensitivity(Norm::kL2, neighbor);
      r.counts = AddGaussianNoise(counts, GaussianSigma(req.budget, r.sensitivity), rng);
    }
    if (!allow_negative) {
      for (double& v : r.counts) v = std::max(0.0, v);
    }
    out.push_back(std::move(r));
  }
  return out;
}

QuantileCandidates MakeQuantileCandidates(std::span<const double> x, double q,
                                          const Bounds& bounds) {
  bounds.Validate();
  if (!(q >= 0.0 && q <= 1.0)) {
    throw InvalidArgumentError("quantile must lie in [0, 1]");
  }
  std::vector<double> z;
  z.reserve(x.size() + 2);
  z.push_back(bounds.lower);
  if (!x.empty()) {
    const ClippedVector clipped = Clip(x, bounds);
    z.insert(z.end(), clipped.values().begin(), clipped.values().end());
    std::sort(z.begin() + 1, z.end());
  }
  z.push_back(bounds.upper);

  const size_t n = x.size();
  const double target = q * static_cast<double>(n);
  QuantileCandidates c;
  for (size_t i = 0; i <= n; ++i) {
    c.left.push_back(z[i]);
    c.right.push_back(z[i + 1]);
    c.utility.push_back(-std::abs(static_cast<double>(i) - target));
    c.measure.push_back(z[i + 1] - z[i]);
  }
  return c;
}

double QuantileDp(std::span<const double> x, double q,
                  const PrivacyBudget& budget, const Bounds& bounds,
                  bool uniform_sampling, RandomSource& rng) {
  const QuantileCandidates c = MakeQuantileCandidates(x, q, bounds);
  const bool any_length = std::any_of(c.measure.begin(), c.measure.end(),
                                      [](double m) { return m > 0.0; });
  const size_t i =
      any_length ? ExponentialMechanism(c.utility, budget,
                                        kQuantileUtilitySensitivity, c.measure,
                                        rng)
                 : ExponentialMechanism(c.utility, budget,
                                        kQuantileUtilitySensitivity, rng);
  if (!uniform_sampling) return c.left[i];
  return c.left[i] + rng.Uniform() * (c.right[i] - c.left[i]);
}

}  // namespace dpkit
