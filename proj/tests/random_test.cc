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
#include <vector>

#include "gtest/gtest.h"

namespace dpkit {
namespace {

TEST(RandomSourceTest, SameSeedReplays) {
  RandomSource a(42);
  RandomSource b(42);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(a.Uniform(), b.Uniform());
    EXPECT_EQ(a.StandardNormal(), b.StandardNormal());
    EXPECT_EQ(a.NextBits(), b.NextBits());
  }
}

TEST(RandomSourceTest, DifferentSeedsDiffer) {
  RandomSource a(1);
  RandomSource b(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.Uniform() == b.Uniform();
  EXPECT_EQ(equal, 0);
}

TEST(RandomSourceTest, UniformStaysInsideOpenInterval) {
  RandomSource rng(7);
  double sum = 0.0;
  constexpr int kDraws = 200000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.Uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Mean of U(0,1) has sd sqrt(1/12/N) ~ 6.5e-4.
  EXPECT_NEAR(sum / kDraws, 0.5, 4e-3);
}

TEST(RandomSourceTest, NormalMoments) {
  RandomSource rng(11);
  constexpr int kDraws = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double z = rng.StandardNormal();
    sum += z;
    sum_sq += z * z;
  }
  EXPECT_NEAR(sum / kDraws, 0.0, 0.012);
  EXPECT_NEAR(sum_sq / kDraws, 1.0, 0.015);
}

TEST(RandomSourceTest, ExponentialMean) {
  RandomSource rng(13);
  constexpr int kDraws = 200000;
  double sum = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double e = rng.StandardExponential();
    ASSERT_GT(e, 0.0);
    sum += e;
  }
  EXPECT_NEAR(sum / kDraws, 1.0, 0.012);
}

TEST(RandomSourceTest, UniformIndexCoversRange) {
  RandomSource rng(5);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.UniformIndex(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(RandomSourceTest, UniformIndexRejectsZero) {
  RandomSource rng(5);
  EXPECT_THROW(rng.UniformIndex(0), std::exception);
}

TEST(RandomSourceTest, SeedIsRemembered) {
  RandomSource rng(123456789);
  rng.Uniform();
  EXPECT_EQ(rng.seed(), 123456789u);
}

}  // namespace
}  // namespace dpkit
