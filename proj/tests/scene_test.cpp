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

#include <string>

#include "csgtopo/error.hpp"
#include "csgtopo/scene.hpp"
#include "oracles.hpp"

namespace {

using namespace csgtopo;

std::string wrap(const std::string& geometry, const std::string& extra = "") {
  return R"({"universe": {"min": [0,0,0], "max": [10,10,10]}, "objects": [{"id": "a", "geometry": )" +
         geometry + "}]" + extra + "}";
}

// Slabs and planes are unbounded, so they only load clipped to a box.
std::string bounded(const std::string& geometry) {
  return R"({"op":"intersection","args":[{"prim":"box","min":[1,1,1],"max":[9,9,9]},)" + geometry + "]}";
}

double value_at(const std::string& geometry, Vec3 p) {
  const Scene s = parse_scene(wrap(geometry));
  return signed_value(*s.objects.at(0).geometry, p);
}

TEST(Nodes, Primitives) {
  EXPECT_LT(value_at(R"({"prim":"box","min":[1,1,1],"max":[3,3,3]})", {2, 2, 2}), 0);
  EXPECT_GT(value_at(R"({"prim":"box","min":[1,1,1],"max":[3,3,3]})", {4, 2, 2}), 0);
  EXPECT_NEAR(value_at(R"({"prim":"sphere","center":[5,5,5],"radius":2})", {5, 5, 5}), -2, 1e-12);
  EXPECT_LT(value_at(R"({"prim":"capsule","p0":[2,5,5],"p1":[8,5,5],"radius":1})", {7.5, 5, 5}), 0);
  EXPECT_LT(value_at(bounded(R"({"prim":"slab","point":[5,5,5],"normal":[0,0,1],"half_thickness":0.5})"),
                     {2, 2, 5.2}),
            0);
  EXPECT_LT(value_at(R"({"prim":"convex","halfspaces":[{"normal":[1,0,0],"offset":4},
                        {"normal":[-1,0,0],"offset":-2},{"normal":[0,1,0],"offset":4},
                        {"normal":[0,-1,0],"offset":-2},{"normal":[0,0,1],"offset":4},
                        {"normal":[0,0,-1],"offset":-2}]})",
                     {3, 3, 3}),
            0);
}

TEST(Nodes, ThickenedLowerDimensionalPrimitives) {
  const std::string line = R"({"prim":"line","p0":[2,5,5],"p1":[8,5,5],"delta":0.5})";
  EXPECT_LT(value_at(line, {5, 5.4, 5}), 0);
  EXPECT_GT(value_at(line, {5, 5.6, 5}), 0);
  const std::string plane = bounded(R"({"prim":"plane","point":[5,5,5],"normal":[0,0,1],"delta":0.25})");
  EXPECT_LT(value_at(plane, {3, 3, 5.2}), 0);
  EXPECT_GT(value_at(plane, {3, 3, 5.3}), 0);
}

TEST(Nodes, Operators) {
  const std::string a = R"({"prim":"box","min":[1,1,1],"max":[5,5,5]})";
  const std::string b = R"({"prim":"box","min":[3,3,3],"max":[7,7,7]})";
  const auto op = [&](const std::string& name) {
    return R"({"op":")" + name + R"(","args":[)" + a + "," + b + "]}";
  };
  EXPECT_LT(value_at(op("union"), {6, 6, 6}), 0);
  EXPECT_GT(value_at(op("intersection"), {2, 2, 2}), 0);
  EXPECT_LT(value_at(op("intersection"), {4, 4, 4}), 0);
  EXPECT_LT(value_at(op("difference"), {2, 2, 2}), 0);
  EXPECT_GT(value_at(op("difference"), {4, 4, 4}), 0);
  const std::string clipped =
      R"({"op":"clip","args":[)" + a + R"(],"plane":{"normal":[1,0,0],"offset":3}})";
  EXPECT_LT(value_at(clipped, {2, 2, 2}), 0);
  EXPECT_GT(value_at(clipped, {4, 2, 2}), 0);
  // A complement reaches the universe boundary, so it only loads inside another operator.
  const std::string holed = R"({"op":"intersection","args":[)" + a + R"(,{"op":"complement","args":[)" +
                            b + "]}]}";
  EXPECT_LT(value_at(holed, {2, 2, 2}), 0);
  EXPECT_THROW(value_at(R"({"op":"complement","args":[)" + a + "]}", {0, 0, 0}), SceneError);
}

TEST(Errors, Rejected) {
  const char* bad[] = {
      "not json",
      "[]",
      R"({"objects": []})",
      R"({"universe": {"min": [0,0,0], "max": [0,1,1]}, "objects": []})",
      R"({"universe": {"min": [0,0,0], "max": [10,10,10]}})",
      R"({"universe": {"min": [0,0,0], "max": [10,10,10]}, "objects": [{"id": ""}]})",
      R"({"universe": {"min": [0,0,0], "max": [10,10,10]}, "objects": [{"id": "a"}, {"id": "a"}]})",
      R"({"universe": {"min": [0,0,0], "max": [10,10,10]}, "objects": [{"id": "a", "data": {"h": true}}]})",
      R"({"universe": {"min": [0,0,0], "max": [10,10,10]}, "objects": [{"id": "a"}],
          "assertions": [["a", "p", "zz"]]})",
      R"({"universe": {"min": [0,0,0], "max": [10,10,10]}, "objects": [{"id": "a"}],
          "assertions": [["a", "p"]]})",
  };
  for (const char* text : bad) EXPECT_THROW(parse_scene(text), SceneError) << text;

  const char* bad_geometry[] = {
      R"({"prim":"box","min":[3,3,3],"max":[1,1,1]})",
      R"({"prim":"sphere","center":[5,5,5],"radius":-1})",
      R"({"prim":"torus"})",
      R"({"op":"union","args":[{"prim":"sphere","center":[5,5,5],"radius":1}]})",
      R"({"op":"xor","args":[]})",
      R"({"prim":"box","min":[0,1,1],"max":[3,3,3]})",            // touches the boundary
      R"({"prim":"box","min":[1,1,1],"max":[1.0001,3,3]})",       // thinner than epsilon
      R"({"op":"intersection","args":[{"prim":"box","min":[1,1,1],"max":[2,2,2]},
                                       {"prim":"box","min":[5,5,5],"max":[6,6,6]}]})",
      R"({"prim":"slab","point":[5,5,5],"normal":[0,0,0],"half_thickness":1})",
  };
  for (const char* g : bad_geometry) EXPECT_THROW(parse_scene(wrap(g)), SceneError) << g;
}

TEST(Errors, MessageNamesObject) {
  try {
    parse_scene(wrap(R"({"prim":"box","min":[0,1,1],"max":[3,3,3]})"));
    FAIL();
  } catch (const SceneError& e) {
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos) << e.what();
  }
}

TEST(Errors, MissingFile) {
  EXPECT_THROW(load_scene("/nonexistent/scene.json"), SceneError);
}

TEST(Build, PropertiesAssertionsAndData) {
  const Scene s = parse_scene(wrap(R"({"prim":"box","min":[1,1,1],"max":[3,3,3]})",
                                   R"(, "properties": [{"name": "next", "characteristics": ["symmetric"]}],
                                        "assertions": [["a", "next", "a"]])"));
  ASSERT_EQ(s.properties.size(), 1u);
  KnowledgeBase kb = build_knowledge_base(s, CharacteristicsProfile::kCorrected);
  EXPECT_TRUE(kb.has_property("a", "next", "a"));
  EXPECT_NE(kb.find_property("topo:overlaps"), nullptr);
  EXPECT_TRUE(kb.individual("a").geometry.has_value());
}

TEST(Build, FixturesLoad) {
  for (const char* name : {"seven_relations", "railstation", "wall", "tall", "composition",
                           "overlap3", "airport"}) {
    EXPECT_NO_THROW(load_scene(oracle::data_path(std::string(name) + ".json"))) << name;
  }
}

TEST(Generator, DeterministicPerSeed) {
  BoxSceneConfig cfg;
  cfg.count = 25;
  cfg.seed = 42;
  const std::string a = box_scene_json(cfg);
  EXPECT_EQ(a, box_scene_json(cfg));
  cfg.seed = 43;
  EXPECT_NE(a, box_scene_json(cfg));
}

TEST(Generator, JsonRoundTripMatchesScene) {
  BoxSceneConfig cfg;
  cfg.count = 12;
  cfg.seed = 5;
  const Scene direct = generate_box_scene(cfg);
  const Scene loaded = parse_scene(box_scene_json(cfg));
  ASSERT_EQ(direct.objects.size(), loaded.objects.size());
  for (std::size_t i = 0; i < direct.objects.size(); ++i) {
    EXPECT_EQ(direct.objects[i].id, loaded.objects[i].id);
    const Aabb& x = direct.objects[i].geometry->bounds();
    const Aabb& y = loaded.objects[i].geometry->bounds();
    EXPECT_EQ(x.min, y.min);
    EXPECT_EQ(x.max, y.max);
  }
  EXPECT_EQ(direct.objects[7].id, "b07");
}

TEST(Generator, EdgesAndClearance) {
  BoxSceneConfig cfg;
  cfg.count = 300;
  cfg.seed = 9;
  cfg.universe_size = 20;
  const Scene s = generate_box_scene(cfg);
  ASSERT_EQ(s.objects.size(), 300u);
  const double clearance = 4 * s.universe.default_epsilon();
  for (const auto& o : s.objects) {
    const Aabb& b = o.geometry->bounds();
    for (double e : {b.max.x - b.min.x, b.max.y - b.min.y, b.max.z - b.min.z}) {
      EXPECT_GE(e, cfg.min_edge);
      EXPECT_LE(e, cfg.max_edge);
    }
    for (double c : {b.min.x, b.min.y, b.min.z}) EXPECT_GE(c, clearance);
    for (double c : {b.max.x, b.max.y, b.max.z}) EXPECT_LE(c, 20 - clearance);
  }
}

TEST(Generator, BadConfig) {
  BoxSceneConfig cfg;
  cfg.count = 3;
  cfg.min_edge = 2;
  cfg.max_edge = 1;
  EXPECT_THROW(generate_box_scene(cfg), ArgumentError);
  cfg.min_edge = 1;
  cfg.max_edge = 50;
  cfg.universe_size = 10;
  EXPECT_THROW(generate_box_scene(cfg), ArgumentError);
}

TEST(Generator, EmptyScene) {
  BoxSceneConfig cfg;
  EXPECT_TRUE(generate_box_scene(cfg).objects.empty());
  EXPECT_NO_THROW(parse_scene(box_scene_json(cfg)));
}

}  // namespace
