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

#include "csgtopo/error.hpp"
#include "csgtopo/knowledge_base.hpp"
#include "csgtopo/scene.hpp"
#include "oracles.hpp"

namespace {

using namespace csgtopo;
using C = Characteristic;

const Universe kTen({0, 0, 0}, {10, 10, 10});

KnowledgeBase people() {
  KnowledgeBase kb;
  for (const char* id : {"a", "b", "c"}) kb.add_individual({id, {"Thing"}, {}, std::nullopt});
  return kb;
}

TEST(SymbolTable, CopiesKeepLookupsValid) {
  SymbolTable original;
  const Sym x = original.intern("x");
  SymbolTable copy = original;
  original = SymbolTable();
  EXPECT_EQ(copy.find("x"), x);
  EXPECT_EQ(copy.intern("x"), x);
  EXPECT_EQ(copy.name(x), "x");
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(4), "4");
  EXPECT_EQ(format_number(6.5), "6.5");
  EXPECT_EQ(format_number(0.1), "0.1");
}

TEST(Individuals, IdsAreUniqueAndSorted) {
  KnowledgeBase kb = people();
  EXPECT_THROW(kb.add_individual({"a", {}, {}, std::nullopt}), KnowledgeBaseError);
  EXPECT_THROW(kb.add_individual({"", {}, {}, std::nullopt}), KnowledgeBaseError);
  kb.add_individual({"B", {}, {}, std::nullopt});
  EXPECT_EQ(kb.individual_ids(), (std::vector<std::string>{"B", "a", "b", "c"}));
  EXPECT_TRUE(kb.has_class("a", "Thing"));
  EXPECT_THROW(kb.individual("zz"), KnowledgeBaseError);
}

TEST(Declarations, ContradictionsAndConflicts) {
  KnowledgeBase kb;
  EXPECT_THROW(kb.declare_property({"p", {C::kSymmetric, C::kAsymmetric}, {}}), DeclarationError);
  EXPECT_THROW(kb.declare_property({"p", {C::kReflexive, C::kIrreflexive}, {}}), DeclarationError);
  kb.declare_property({"p", {C::kTransitive}, {}});
  EXPECT_THROW(kb.declare_property({"p", {C::kSymmetric}, {}}), DeclarationError);
  EXPECT_NO_THROW(kb.declare_property({"p", {C::kTransitive}, {}}));
}

TEST(Declarations, InverseIsPaired) {
  KnowledgeBase kb;
  kb.declare_property({"hasPart", {}, "partOf"});
  ASSERT_NE(kb.find_property("partOf"), nullptr);
  EXPECT_EQ(kb.find_property("partOf")->inverse_of, "hasPart");
  EXPECT_THROW(kb.declare_property({"partOf", {}, "other"}), DeclarationError);
}

TEST(Profiles, TopologyCharacteristics) {
  for (auto profile : {CharacteristicsProfile::kPaper, CharacteristicsProfile::kCorrected}) {
    KnowledgeBase kb;
    declare_topology_properties(kb, profile);
    const auto* disjoint = kb.find_property("topo:disjoint");
    ASSERT_NE(disjoint, nullptr);
    EXPECT_TRUE(disjoint->has(C::kSymmetric));
    EXPECT_TRUE(disjoint->has(C::kIrreflexive));
    EXPECT_EQ(disjoint->has(C::kTransitive), profile == CharacteristicsProfile::kPaper);
    const auto* contains = kb.find_property("topo:contains");
    EXPECT_TRUE(contains->has(C::kTransitive));
    EXPECT_TRUE(contains->has(C::kAsymmetric));
    EXPECT_EQ(contains->inverse_of, "topo:inside");
    EXPECT_TRUE(kb.find_property("topo:overlaps")->has(C::kSymmetric));
    EXPECT_EQ(kb.find_property("topo:covers")->inverse_of, "topo:coveredBy");
  }
  EXPECT_EQ(parse_profile("paper"), CharacteristicsProfile::kPaper);
  EXPECT_FALSE(parse_profile("strict").has_value());
}

TEST(Facts, ProvenanceKeepsTheLeast) {
  KnowledgeBase kb = people();
  EXPECT_TRUE(kb.assert_property("a", "knows", "b", Provenance::inferred("rule-2")));
  EXPECT_FALSE(kb.assert_property("a", "knows", "b", Provenance::inferred("rule-1")));
  EXPECT_EQ(kb.provenance("a", "knows", "b"), Provenance::inferred("rule-1"));
  kb.assert_property("a", "knows", "b", Provenance::computed());
  EXPECT_EQ(kb.provenance("a", "knows", "b"), Provenance::computed());
  kb.assert_property("a", "knows", "b");
  EXPECT_EQ(kb.provenance("a", "knows", "b"), Provenance::asserted());
  kb.assert_property("a", "knows", "b", Provenance::inferred("rule-0"));
  EXPECT_EQ(kb.provenance("a", "knows", "b"), Provenance::asserted());
  EXPECT_EQ(kb.assertion_count(), 1u);
  EXPECT_THROW(kb.assert_property("a", "knows", "nobody"), KnowledgeBaseError);
}

TEST(Facts, RetractOnlyAsserted) {
  KnowledgeBase kb = people();
  kb.assert_property("a", "knows", "b");
  kb.assert_property("b", "knows", "c", Provenance::inferred("rule-1"));
  EXPECT_FALSE(kb.retract("b", "knows", "c"));
  EXPECT_TRUE(kb.retract("a", "knows", "b"));
  EXPECT_FALSE(kb.has_property("a", "knows", "b"));
  EXPECT_TRUE(kb.needs_saturation());
}

TEST(Relations, RecordedInBothDirections) {
  KnowledgeBase kb = people();
  declare_topology_properties(kb, CharacteristicsProfile::kCorrected);
  kb.record_relation("a", "b", TopoRelation::kContains);
  EXPECT_TRUE(kb.has_property("a", "topo:contains", "b"));
  EXPECT_TRUE(kb.has_property("b", "topo:inside", "a"));
  EXPECT_EQ(kb.provenance("b", "topo:inside", "a"), Provenance::computed());
  EXPECT_EQ(kb.computed_relation("a", "b"), TopoRelation::kContains);
  EXPECT_EQ(kb.computed_relation("b", "a"), TopoRelation::kInside);
  EXPECT_FALSE(kb.computed_relation("a", "c").has_value());
}

TEST(Export, SortedLinesWithProvenance) {
  KnowledgeBase kb;
  kb.add_individual({"b", {"Box"}, {{"height", 4.0}, {"label", std::string("north")}}, std::nullopt});
  kb.add_individual({"a", {}, {}, std::nullopt});
  kb.assert_property("b", "near", "a", Provenance::inferred("rule-1"));
  EXPECT_EQ(export_triples(kb),
            "b\theight\t4\tasserted\n"
            "b\tlabel\t\"north\"\tasserted\n"
            "b\tnear\ta\tinferred(rule-1)\n"
            "b\trdf:type\tBox\tasserted\n");
  EXPECT_EQ(fact_set(kb).front(), "b\theight\t4");
  EXPECT_EQ(export_triples(KnowledgeBase()), "");
}

TEST(Enrich, SevenRelationScene) {
  const Scene scene = load_scene(oracle::data_path("seven_relations.json"));
  KnowledgeBase kb = build_knowledge_base(scene, CharacteristicsProfile::kCorrected);
  const auto report = enrich_topology(kb, RelateOptions::defaults_for(scene.universe, true));
  EXPECT_EQ(report.pairs, 66u);
  EXPECT_EQ(report.relate_calls, 66u);
  EXPECT_TRUE(report.errors.empty());
  EXPECT_EQ(kb.computed_relation("m1", "m2"), TopoRelation::kMeet);
  EXPECT_EQ(kb.computed_relation("v2", "v1"), TopoRelation::kCoveredBy);
  EXPECT_EQ(report.counts.at("meet"), 2u);
  std::size_t total = 0;
  for (const auto& [token, n] : report.counts) total += n;
  EXPECT_EQ(total, 132u);
}

TEST(Enrich, TwoDisjointBoxesAndEmptyScene) {
  KnowledgeBase kb;
  kb.add_individual({"p", {}, {}, Solid::box(kTen, {1, 1, 1}, {2, 2, 2})});
  kb.add_individual({"q", {}, {}, Solid::box(kTen, {5, 5, 5}, {6, 6, 6})});
  const auto report = enrich_topology(kb, RelateOptions::defaults_for(kTen));
  EXPECT_EQ(report.counts, (std::map<std::string, std::size_t>{{"disjoint", 2}}));
  KnowledgeBase none;
  EXPECT_EQ(enrich_topology(none, RelateOptions::defaults_for(kTen)).pairs, 0u);
}

TEST(Enrich, PairErrorsDoNotStopOtherPairs) {
  KnowledgeBase kb;
  kb.add_individual({"p", {}, {}, Solid::box(kTen, {1, 1, 1}, {2, 2, 2})});
  kb.add_individual({"q", {}, {}, Solid::box(kTen, {5, 5, 5}, {6, 6, 6})});
  kb.add_individual({"void", {}, {}, intersect(Solid::box(kTen, {1, 1, 1}, {2, 2, 2}),
                                               Solid::box(kTen, {5, 5, 5}, {6, 6, 6}))});
  const auto report = enrich_topology(kb, RelateOptions::defaults_for(kTen), 2);
  EXPECT_EQ(report.pairs, 3u);
  EXPECT_EQ(report.errors.size(), 2u);
  EXPECT_EQ(kb.computed_relation("p", "q"), TopoRelation::kDisjoint);
}

}  // namespace
