// Copyright 2026 The csgtopo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <gtest/gtest.h>

#include "csgtopo/geometry.hpp"
#include "oracles.hpp"

namespace {

using namespace csgtopo;

TEST(OctreeProperty, AgreesWithVoxelSampling) {
  const Universe u({0, 0, 0}, {1, 1, 1});
  const double eps = 1.0 / 32;
  std::mt19937_64 rng(2024);
  int compared = 0;
  int empty = 0;
  for (int t = 0; t < 60; ++t) {
    const auto tree = oracle::random_csg(rng, u, 3);
    const auto verdict = oracle::voxel_empty(*tree.shape, u.box(), eps / 4, eps);
    if (verdict.marginal) continue;
    ++compared;
    empty += verdict.empty ? 1 : 0;
    ASSERT_EQ(is_empty(tree.solid, eps), verdict.empty)
        << tree.text << " min sampled value " << verdict.min_value;
  }
  EXPECT_GE(compared, 40);
  EXPECT_GT(empty, 0);
  EXPECT_LT(empty, compared);
}

TEST(Octree, FindsThinInteriorAboveResolution) {
  const Universe u({0, 0, 0}, {1, 1, 1});
  const double eps = 1.0 / 64;
  // A slab twice the resolution thick is found; one far thinner is not.
  const Solid thick = intersect(Solid::slab(u, {0.5, 0.5, 0.5}, {0, 0, 1}, 2 * eps),
                                Solid::box(u, {0.2, 0.2, 0.2}, {0.8, 0.8, 0.8}));
  const Solid thin = intersect(Solid::slab(u, {0.5, 0.5, 0.5}, {0, 0, 1}, eps / 16),
                               Solid::box(u, {0.2, 0.2, 0.2}, {0.8, 0.8, 0.8}));
  EXPECT_FALSE(is_empty(thick, eps));
  EXPECT_TRUE(is_empty(thin, eps));
}

TEST(Octree, DeterministicAcrossCalls) {
  const Universe u({0, 0, 0}, {1, 1, 1});
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto tree = oracle::random_csg(rng, u, 3);
    EXPECT_EQ(is_empty(tree.solid, 1.0 / 32), is_empty(tree.solid, 1.0 / 32));
  }
}

}  // namespace
