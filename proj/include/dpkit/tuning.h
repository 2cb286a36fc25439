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

#ifndef DPKIT_TUNING_H_
#define DPKIT_TUNING_H_

#include <vector>

#include "dpkit/bounds.h"
#include "dpkit/models.h"
#include "dpkit/random.h"

namespace dpkit {

// Shuffles 0..n-1 and cuts it into m + 1 contiguous chunks whose sizes differ
// by at most one, the larger chunks first. The last chunk is the validation
// fold. Throws DataError when n < m + 1.
std::vector<std::vector<size_t>> SplitFolds(size_t n, size_t m,
                                            RandomSource& rng);

// Utility sensitivities: one misclassification, and (c₁ - c₀)² for the
// negative squared error with predictions clipped into the y bounds.
inline constexpr double kMisclassificationSensitivity = 1.0;
double SquaredErrorSensitivity(const Bounds& y_bounds);

struct TuningResult {
  TrainedModel model;
  size_t selected = 0;
  // Validation utilities of every candidate. These are computed from the
  // data and are not private; they are kept for tests and diagnostics only.
  std::vector<double> utilities;
  double sensitivity = 0.0;
  std::vector<std::vector<size_t>> folds;
};

// Candidate i trains on fold i; the exponential mechanism with the shared ε
// then picks one by validation utility. Candidates must share kind and
// budget. Classifiers use -(#errors); linear regression uses
// -Σ(clip(pred, y bounds) - y)² and needs data.y_bounds.
TuningResult TuneModels(const std::vector<ModelSpec>& candidates,
                        const TrainingData& data, RandomSource& rng);

}  // namespace dpkit

#endif  // DPKIT_TUNING_H_
