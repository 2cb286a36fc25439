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

#ifndef DPKIT_RANDOM_H_
#define DPKIT_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace dpkit {

// Seedable stream of uniform variates on the open interval (0, 1).
//
// All randomness in the library is drawn from a RandomSource so that a run can
// be replayed from its seed. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard, and the uniform mapping is done here
// rather than through std::uniform_real_distribution (which is
// implementation-defined), so replays are portable across standard libraries.
//
// A RandomSource is single-consumer and must not be shared across threads.
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed);

  RandomSource(const RandomSource&) = delete;
  RandomSource& operator=(const RandomSource&) = delete;
  RandomSource(RandomSource&&) = default;
  RandomSource& operator=(RandomSource&&) = default;

  // Uniform on (0, 1); never returns exactly 0 or 1.
  double Uniform();

  // Raw 64 bits, used to derive child seeds.
  uint64_t NextBits();

  // N(0, 1) by inverse CDF of a single uniform.
  double StandardNormal();

  // Exp(1) as -log(U).
  double StandardExponential();

  // Uniform integer in [0, n). Requires n > 0.
  size_t UniformIndex(size_t n);

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

// A seed drawn from the operating system's entropy source.
uint64_t SeedFromEntropy();

}  // namespace dpkit

#endif  // DPKIT_RANDOM_H_
