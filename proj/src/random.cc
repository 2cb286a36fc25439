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

#include "dpkit/random.h"

#include <cmath>

#include "dpkit/errors.h"
#include "dpkit/normal.h"

namespace dpkit {

RandomSource::RandomSource(uint64_t seed) : seed_(seed), engine_(seed) {}

double RandomSource::Uniform() {
  // 53 random bits, offset by half an ulp so 0 and 1 are unreachable.
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
}

uint64_t RandomSource::NextBits() { return engine_(); }

double RandomSource::StandardNormal() { return InverseNormalCdf(Uniform()); }

double RandomSource::StandardExponential() { return -std::log(Uniform()); }

size_t RandomSource::UniformIndex(size_t n) {
  if (n == 0) throw InvalidArgumentError("UniformIndex requires n > 0");
  size_t index = static_cast<size_t>(Uniform() * static_cast<double>(n));
  return index < n ? index : n - 1;
}

uint64_t SeedFromEntropy() {
  std::random_device device;
  return (static_cast<uint64_t>(device()) << 32) ^ device();
}

}  // namespace dpkit
