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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "csgtopo/engine.hpp"
#include "csgtopo/error.hpp"
#include "csgtopo/knowledge_base.hpp"
#include "csgtopo/rules.hpp"
#include "csgtopo/scene.hpp"
#include "oracles.hpp"

namespace {

using namespace csgtopo;

struct Fixture {
  Scene scene;
  KnowledgeBase kb;
  EvaluationOptions options;
};

Fixture load(const std::string& name, bool refine = false, int jobs = 1) {
  Scene scene = load_scene(oracle::data_path(name + ".json"));
  KnowledgeBase kb = build_knowledge_base(scene, CharacteristicsProfile::kCorrected);
  EvaluationOptions options;
  options.relate = RelateOptions::defaults_for(scene.universe, refine);
  options.jobs = jobs;
  return {std::move(scene), std::move(kb), options};
}

std::vector<Rule> rules_of(const std::string& name) {
  return parse_rules(oracle::read_text(oracle::data_path(name)));
}

std::string error_of(const std::vector<Rule>& rules, KnowledgeBase& kb,
                     const EvaluationOptions& options) {
  try {
    evaluate(rules, kb, options);
  } catch (const EvaluationError& e) {
    return e.what();
  }
  return "";
}

TEST(Fixtures, RailStation) {
  auto f = load("railstation");
  const auto report = evaluate(rules_of("railstation.rules"), f.kb, f.options);
  EXPECT_TRUE(f.kb.has_class("b1", "RailStation"));
  EXPECT_FALSE(f.kb.has_class("b2", "RailStation"));
  EXPECT_FALSE(f.kb.has_class("r1", "RailStation"));
  EXPECT_EQ(f.kb.provenance("b1", "rdf:type", "RailStation"), Provenance::inferred("rule-1"));
  const auto text = report.log_text();
  EXPECT_NE(text.find("\trule-1\t?b=b1,?r=r1\tb1\trdf:type\tRailStation"), std::string::npos) << text;
  EXPECT_GE(report.rounds, 1u);
}

TEST(Fixtures, WallReclassification) {
  auto f = load("wall");
  evaluate(rules_of("wall.rules"), f.kb, f.options);
  EXPECT_TRUE(f.kb.has_class("vb1", "Wall"));
  EXPECT_TRUE(f.kb.has_class("vb1", "VerticalBoundingBox"));
  EXPECT_FALSE(f.kb.has_class("vb2", "Wall"));  // too short
  EXPECT_FALSE(f.kb.has_class("vb3", "Wall"));  // disjoint from the wall
}

TEST(Fixtures, TallThresholdIsStrict) {
  auto f = load("tall");
  evaluate(rules_of("tall.rules"), f.kb, f.options);
  EXPECT_TRUE(f.kb.has_class("p1", "Tall"));
  EXPECT_FALSE(f.kb.has_class("p2", "Tall"));
  EXPECT_FALSE(f.kb.has_class("p3", "Tall"));
}

TEST(Fixtures, CompositionRuleAsWritten) {
  auto f = load("composition");
  evaluate(rules_of("composition.rules"), f.kb, f.options);
  EXPECT_EQ(f.kb.provenance("a", "topo:disjoint", "c"), Provenance::inferred("rule-1"));
  EXPECT_TRUE(f.kb.has_property("c", "topo:disjoint", "a"));
  EXPECT_FALSE(f.kb.has_property("a", "topo:disjoint", "b"));
}

TEST(Errors, ComparisonOnString) {
  KnowledgeBase kb;
  kb.add_individual({"p", {"Person"}, {{"hasHeight", std::string("tall")}}, std::nullopt});
  const auto msg = error_of(rules_of("tall.rules"), kb, EvaluationOptions{});
  EXPECT_NE(msg.find("type error"), std::string::npos) << msg;
  EXPECT_NE(msg.find("rule-1"), std::string::npos) << msg;
}

TEST(Errors, MissingGeometry) {
  const Universe u({0, 0, 0}, {10, 10, 10});
  KnowledgeBase kb;
  kb.add_individual({"b", {"Building"}, {}, std::nullopt});
  kb.add_individual({"r", {"Railway"}, {}, Solid::box(u, {1, 1, 1}, {3, 3, 3})});
  EvaluationOptions options;
  options.relate = RelateOptions::defaults_for(u);
  const auto msg = error_of(
      parse_rules("Building(?b) ∧ Railway(?r) ∧ swrl_topo:overlaps(?b, ?r) → RailStation(?b)"), kb,
      options);
  EXPECT_NE(msg.find("?b=b"), std::string::npos) << msg;
  EXPECT_NE(msg.find("rule-1"), std::string::npos) << msg;
}

TEST(Errors, PropertyAtomWithoutGeometryMatchesStoredFacts) {
  auto f = load("composition");
  f.kb.assert_class("a", "Building");
  f.kb.assert_class("c", "Railway");
  f.kb.assert_property("a", "topo:overlaps", "c");
  evaluate(rules_of("railstation.rules"), f.kb, f.options);
  EXPECT_TRUE(f.kb.has_class("a", "RailStation"));
}

TEST(Replay, ReproducesExport) {
  for (const char* name : {"railstation", "wall", "tall", "composition", "airport"}) {
    const bool refine = std::string(name) == "airport";
    auto live = load(name, refine);
    const auto report = evaluate(rules_of(std::string(name) + ".rules"), live.kb, live.options);
    auto replayed = load(name, refine);
    replay_log(replayed.kb, report.log_text());
    EXPECT_EQ(export_triples(replayed.kb), export_triples(live.kb)) << name;
  }
}

TEST(Replay, RejectsMalformedLines) {
  auto f = load("composition");
  EXPECT_THROW(replay_log(f.kb, "1\trule-1\t\ta\tb\n"), Error);
}

TEST(Airport, ExpectedFacts) {
  auto f = load("airport", true);
  evaluate(rules_of("airport.rules"), f.kb, f.options);
  std::set<std::string> stations;
  for (const auto& id : f.kb.individual_ids()) {
    if (f.kb.has_class(id, "RailStation")) stations.insert(id);
  }
  EXPECT_FALSE(stations.empty());
  const auto facts = fact_set(f.kb);
  const auto has_pred = [&](const std::string& p) {
    return std::any_of(facts.begin(), facts.end(),
                       [&](const std::string& l) { return l.find("\t" + p + "\t") != std::string::npos; });
  };
  EXPECT_TRUE(has_pred("connectedTo"));
  EXPECT_TRUE(has_pred("servedBy"));
}

// Random box scenes checked against a naive fixpoint computed from exact box relations.

const char* kChainRules[] = {
    "B(?x) ∧ B(?y) ∧ swrl_topo:overlaps(?x, ?y) → near(?x, ?y)",
    "near(?x, ?y) ∧ near(?y, ?z) → reach(?x, ?z)",
    "reach(?x, ?y) ∧ swrl_topo:disjoint(?x, ?y) → Far(?x)",
    "Far(?x) ∧ near(?x, ?y) → Hub(?y)",
};

std::set<std::string> naive_facts(const Scene& scene) {
  const std::size_t n = scene.objects.size();
  std::vector<std::vector<TopoRelation>> rel(n, std::vector<TopoRelation>(n, TopoRelation::kEquals));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) {
        rel[i][j] = oracle::box_relation(scene.objects[i].geometry->bounds(),
                                         scene.objects[j].geometry->bounds(), false);
      }
    }
  }
  std::vector<std::vector<bool>> near(n, std::vector<bool>(n)), reach = near;
  std::vector<bool> far(n), hub(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) near[i][j] = rel[i][j] == TopoRelation::kOverlaps;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (near[i][j] && near[j][k]) reach[i][k] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j] && rel[i][j] == TopoRelation::kDisjoint) far[i] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (far[i] && near[i][j]) hub[j] = true;

  std::set<std::string> out;
  const auto id = [&](std::size_t i) { return scene.objects[i].id; };
  for (std::size_t i = 0; i < n; ++i) {
    if (far[i]) out.insert(id(i) + "\trdf:type\tFar");
    if (hub[i]) out.insert(id(i) + "\trdf:type\tHub");
    for (std::size_t j = 0; j < n; ++j) {
      if (near[i][j]) out.insert(id(i) + "\tnear\t" + id(j));
      if (reach[i][j]) out.insert(id(i) + "\treach\t" + id(j));
    }
  }
  return out;
}

std::set<std::string> derived_facts(const KnowledgeBase& kb) {
  std::set<std::string> out;
  for (const auto& line : fact_set(kb)) {
    if (line.find("\tnear\t") != std::string::npos || line.find("\treach\t") != std::string::npos ||
        line.ends_with("\tFar") || line.ends_with("\tHub")) {
      out.insert(line);
    }
  }
  return out;
}

BoxSceneConfig small_scene(std::uint64_t seed, std::size_t count = 10) {
  BoxSceneConfig cfg;
  cfg.count = count;
  cfg.seed = seed;
  cfg.universe_size = 6.0;
  cfg.class_name = "B";
  return cfg;
}

TEST(Determinism, RuleOrderAndNaiveOracle) {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scene scene = generate_box_scene(small_scene(seed));
    const auto expected = naive_facts(scene);
    std::vector<std::string> lines(std::begin(kChainRules), std::end(kChainRules));
    std::set<std::string> first;
    for (int perm = 0; perm < 3; ++perm) {
      std::shuffle(lines.begin(), lines.end(), rng);
      std::string text;
      for (const auto& l : lines) text += l + "\n";
      KnowledgeBase kb = build_knowledge_base(scene, CharacteristicsProfile::kCorrected);
      EvaluationOptions options;
      options.relate = RelateOptions::defaults_for(scene.universe);
      evaluate(parse_rules(text), kb, options);
      const auto got = derived_facts(kb);
      if (perm == 0) first = got;
      EXPECT_EQ(got, first) << "seed " << seed;
      EXPECT_EQ(got, expected) << "seed " << seed;
    }
  }
}

TEST(Determinism, ThreadsDoNotChangeResults) {
  const Scene scene = generate_box_scene(small_scene(99, 14));
  std::string text;
  for (const char* l : kChainRules) text += std::string(l) + "\n";
  std::string exports[2], logs[2];
  for (int i = 0; i < 2; ++i) {
    KnowledgeBase kb = build_knowledge_base(scene, CharacteristicsProfile::kCorrected);
    EvaluationOptions options;
    options.relate = RelateOptions::defaults_for(scene.universe);
    options.jobs = i == 0 ? 1 : 3;
    logs[i] = evaluate(parse_rules(text), kb, options).log_text();
    exports[i] = export_triples(kb);
  }
  EXPECT_EQ(exports[0], exports[1]);
  EXPECT_EQ(logs[0], logs[1]);
}

TEST(Memo, RelateCallsBoundedByPairs) {
  for (std::size_t n : {2u, 7u, 15u}) {
    const Scene scene = generate_box_scene(small_scene(n, n));
    KnowledgeBase kb = build_knowledge_base(scene, CharacteristicsProfile::kCorrected);
    EvaluationOptions options;
    options.relate = RelateOptions::defaults_for(scene.universe);
    std::string text;
    for (const char* l : kChainRules) text += std::string(l) + "\n";
    const auto report = evaluate(parse_rules(text), kb, options);
    EXPECT_LE(report.relate_calls, n * (n - 1) / 2) << n;
    EXPECT_GT(report.relate_calls, 0u);
  }
}

const char* kOverlapQuery =
    "Vertical_BoundingBox(?x) ∧ Vertical_BoundingBox(?y) ∧ swrl_topo:overlaps(?x, ?y) → "
    "sqwrl:selectDistinct(?x,?y)";

TEST(Query, SymmetricDistinctPairs) {
  auto f = load("overlap3");
  const auto result = query(parse_query(oracle::read_text(oracle::data_path("overlap.query"))),
                            f.kb, f.options);
  EXPECT_EQ(result.to_tsv(), "?x\t?y\nx1\tx2\nx1\tx3\nx2\tx3\n");
  EXPECT_EQ(result.relate_calls, 3u);
}

TEST(Query, PlainSelectKeepsBothOrders) {
  auto f = load("overlap3");
  const auto result = query(
      parse_query("Vertical_BoundingBox(?x) ∧ Vertical_BoundingBox(?y) ∧ swrl_topo:overlaps(?x, ?y) → "
                  "sqwrl:select(?x,?y)"),
      f.kb, f.options);
  EXPECT_EQ(result.rows.size(), 6u);
}

TEST(Query, DisjointBoxesGiveEmptyResult) {
  const Universe u({0, 0, 0}, {10, 10, 10});
  KnowledgeBase kb;
  kb.add_individual({"a", {"Vertical_BoundingBox"}, {}, Solid::box(u, {1, 1, 1}, {2, 2, 2})});
  kb.add_individual({"b", {"Vertical_BoundingBox"}, {}, Solid::box(u, {5, 5, 5}, {6, 6, 6})});
  EvaluationOptions options;
  options.relate = RelateOptions::defaults_for(u);
  const auto result = query(parse_query(kOverlapQuery), kb, options);
  EXPECT_TRUE(result.rows.empty());
  EXPECT_EQ(result.to_tsv(), "?x\t?y\n");
}

TEST(Query, BuiltinAgreesWithEnrichedKnowledgeBase) {
  for (std::uint64_t seed : {3u, 11u, 23u}) {
    BoxSceneConfig cfg = small_scene(seed, 12);
    cfg.class_name = "Vertical_BoundingBox";
    const Scene scene = generate_box_scene(cfg);
    KnowledgeBase live = build_knowledge_base(scene, CharacteristicsProfile::kCorrected);
    KnowledgeBase enriched = build_knowledge_base(scene, CharacteristicsProfile::kCorrected);
    EvaluationOptions options;
    options.relate = RelateOptions::defaults_for(scene.universe);
    enrich_topology(enriched, options.relate);

    const auto a = query(parse_query(kOverlapQuery), live, options);
    const auto b = query(parse_query(kOverlapQuery), enriched, options);
    const auto c = query(
        parse_query("Vertical_BoundingBox(?x) ∧ Vertical_BoundingBox(?y) ∧ topo:overlaps(?x, ?y) → "
                    "sqwrl:selectDistinct(?x,?y)"),
        enriched, options);
    EXPECT_EQ(a.rows, b.rows);
    EXPECT_EQ(a.rows, c.rows);
    EXPECT_EQ(b.relate_calls, 0u);  // answered from the computed index
  }
}

TEST(Query, CachedSecondRun) {
  auto f = load("overlap3");
  const Query q = parse_query(kOverlapQuery);
  const auto first = query(q, f.kb, f.options);
  const auto second = query(q, f.kb, f.options);
  EXPECT_EQ(first.rows, second.rows);
  EXPECT_EQ(second.relate_calls, 0u);
}

}  // namespace
