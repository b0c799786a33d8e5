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

#include "csgtopo/error.hpp"
#include "csgtopo/topology.hpp"
#include "oracles.hpp"

namespace {

using namespace csgtopo;

const Universe kTen({0, 0, 0}, {10, 10, 10});

Solid box(Vec3 lo, Vec3 hi) { return Solid::box(kTen, lo, hi); }

TEST(FourIM, MaskText) { EXPECT_EQ(to_string(FourIMask{false, true, true, true}), "(0,1;1,1)"); }

TEST(FourIM, BoxConfigurations) {
  const double eps = kTen.default_epsilon();
  const Solid a = box({1, 1, 1}, {4, 4, 4});
  EXPECT_EQ(four_im_mask(a, box({6, 6, 6}, {8, 8, 8}), eps), (FourIMask{false, true, true, true}));
  EXPECT_EQ(four_im_mask(a, box({2, 2, 2}, {3, 3, 3}), eps), (FourIMask{true, true, false, true}));
  EXPECT_EQ(four_im_mask(a, box({3, 3, 3}, {6, 6, 6}), eps), (FourIMask{true, true, true, true}));
  EXPECT_EQ(four_im_mask(a, a, eps), (FourIMask{true, false, false, true}));
}

TEST(Classify, FiveRelations) {
  EXPECT_EQ(classify({false, true, true, true}), TopoRelation::kDisjoint);
  EXPECT_EQ(classify({true, true, false, true}), TopoRelation::kContains);
  EXPECT_EQ(classify({true, false, true, true}), TopoRelation::kInside);
  EXPECT_EQ(classify({true, false, false, true}), TopoRelation::kEquals);
  EXPECT_EQ(classify({true, true, true, true}), TopoRelation::kOverlaps);
}

TEST(Classify, OtherMasksAreRejected) {
  int rejected = 0;
  for (int bits = 0; bits < 16; ++bits) {
    const FourIMask m{(bits & 8) != 0, (bits & 4) != 0, (bits & 2) != 0, (bits & 1) != 0};
    try {
      classify(m);
    } catch (const UnclassifiableMaskError& e) {
      ++rejected;
      EXPECT_NE(std::string(e.what()).find(to_string(m)), std::string::npos);
    }
  }
  EXPECT_EQ(rejected, 11);
}

TEST(Relation, TokensRoundTrip) {
  for (auto r : kAllRelations) {
    EXPECT_EQ(parse_relation(to_string(r)), r);
    EXPECT_EQ(inverse(inverse(r)), r);
  }
  EXPECT_EQ(inverse(TopoRelation::kContains), TopoRelation::kInside);
  EXPECT_EQ(inverse(TopoRelation::kCovers), TopoRelation::kCoveredBy);
  EXPECT_EQ(inverse(TopoRelation::kMeet), TopoRelation::kMeet);
  EXPECT_FALSE(parse_relation("touches").has_value());
}

TEST(Relate, RefinementFindsContact) {
  const auto plain = RelateOptions::defaults_for(kTen, false);
  const auto refined = RelateOptions::defaults_for(kTen, true);
  const Solid a = box({1, 1, 1}, {3, 3, 3});
  const Solid face = box({3, 1, 1}, {5, 3, 3});
  const Solid nested = box({1, 1.5, 1.5}, {2, 2.5, 2.5});
  EXPECT_EQ(relate(a, face, plain), TopoRelation::kDisjoint);
  EXPECT_EQ(relate(a, face, refined), TopoRelation::kMeet);
  EXPECT_EQ(relate(a, nested, plain), TopoRelation::kContains);
  EXPECT_EQ(relate(a, nested, refined), TopoRelation::kCovers);
  EXPECT_EQ(relate(nested, a, refined), TopoRelation::kCoveredBy);
  EXPECT_EQ(relate(a, box({1.5, 1.5, 1.5}, {2.5, 2.5, 2.5}), refined), TopoRelation::kContains);
}

TEST(Relate, CurvedSolids) {
  const auto opts = RelateOptions::defaults_for(kTen, true);
  const Solid ball = Solid::sphere(kTen, {5, 5, 5}, 2);
  const Solid core = Solid::sphere(kTen, {5, 5, 5}, 1);
  const Solid rod = Solid::capsule(kTen, {2, 5, 5}, {8, 5, 5}, 0.5);
  EXPECT_EQ(relate(ball, core, opts), TopoRelation::kContains);
  EXPECT_EQ(relate(ball, rod, opts), TopoRelation::kOverlaps);
  EXPECT_EQ(relate(subtract(ball, core), core, opts), TopoRelation::kMeet);
}

TEST(Relate, RejectsDegenerateAndBoundaryOperands) {
  const auto opts = RelateOptions::defaults_for(kTen);
  const Solid a = box({1, 1, 1}, {3, 3, 3});
  const Solid empty = intersect(a, box({5, 5, 5}, {6, 6, 6}));
  EXPECT_THROW(relate(a, empty, opts), DegenerateOperandError);
  EXPECT_THROW(relate(a, box({0, 1, 1}, {2, 2, 2}), opts), DomainError);
  EXPECT_THROW(relate(a, complement(a), opts), DomainError);
  const Universe other({0, 0, 0}, {5, 5, 5});
  EXPECT_THROW(relate(a, Solid::box(other, {1, 1, 1}, {2, 2, 2}), opts), ArgumentError);
}

TEST(RelateProperty, ReflexiveOnRandomSolids) {
  const Universe u({0, 0, 0}, {1, 1, 1});
  const auto opts = RelateOptions::defaults_for(u, true);
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 20) {
    const auto tree = oracle::random_csg(rng, u, 2);
    const double eps = opts.epsilon;
    if (is_empty(tree.solid, eps) || touches_universe_boundary(tree.solid, eps, eps)) continue;
    ASSERT_EQ(relate(tree.solid, tree.solid, opts), TopoRelation::kEquals) << tree.text;
    ++checked;
  }
}

TEST(RelateProperty, SwapGivesInverse) {
  const Universe u({0, 0, 0}, {1, 1, 1});
  const auto opts = RelateOptions::defaults_for(u, true);
  std::mt19937_64 rng(32);
  int checked = 0;
  while (checked < 30) {
    const auto a = oracle::random_csg(rng, u, 1);
    const auto b = oracle::random_csg(rng, u, 1);
    const double eps = opts.epsilon;
    bool usable = true;
    for (const auto* s : {&a.solid, &b.solid}) {
      usable = usable && !is_empty(*s, eps) && !touches_universe_boundary(*s, eps, eps);
    }
    if (!usable) continue;
    ASSERT_EQ(relate(b.solid, a.solid, opts), inverse(relate(a.solid, b.solid, opts)))
        << a.text << " / " << b.text;
    ++checked;
  }
}

TEST(RelateProperty, MatchesBoxOracle) {
  const auto opts = RelateOptions::defaults_for(kTen, true);
  std::mt19937_64 rng(33);
  // Coordinates on a 0.25 grid: either equal or at least 4 epsilon apart.
  std::uniform_int_distribution<int> cell(2, 38);
  auto random_box = [&] {
    Aabb b;
    for (int i = 0; i < 3; ++i) {
      int lo = cell(rng);
      int hi = cell(rng);
      while (hi == lo) hi = cell(rng);
      if (hi < lo) std::swap(lo, hi);
      (i == 0 ? b.min.x : i == 1 ? b.min.y : b.min.z) = 0.25 * lo;
      (i == 0 ? b.max.x : i == 1 ? b.max.y : b.max.z) = 0.25 * hi;
    }
    return b;
  };
  for (int n = 0; n < 150; ++n) {
    const Aabb a = random_box();
    const Aabb b = random_box();
    ASSERT_EQ(relate(box(a.min, a.max), box(b.min, b.max), opts), oracle::box_relation(a, b, true))
        << "pair " << n;
  }
}

}  // namespace
