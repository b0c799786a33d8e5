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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csgtopo/geometry.hpp"
#include "csgtopo/knowledge_base.hpp"

namespace csgtopo {

struct SceneObject {
  std::string id;
  std::vector<std::string> classes;
  std::map<std::string, Literal> data;
  std::optional<Solid> geometry;
};

struct SceneAssertion {
  std::string subject;
  std::string property;
  std::string object;
};

/// A parsed and validated scene document.
struct Scene {
  Universe universe{{0, 0, 0}, {1, 1, 1}};
  std::vector<PropertyDecl> properties;
  std::vector<SceneObject> objects;
  std::vector<SceneAssertion> assertions;
};

struct SceneOptions {
  /// Resolution for load-time validation; <= 0 selects the universe default.
  double epsilon = 0.0;
  /// Default thickness for line and plane nodes without their own "delta";
  /// <= 0 selects the universe default.
  double delta = 0.0;
};

/// Parses a scene document:
///
///   {"universe": {"min": [x, y, z], "max": [x, y, z]},
///    "properties": [{"name": "p", "characteristics": ["transitive"], "inverse_of": "q"}],
///    "objects": [{"id": "a", "classes": ["Building"], "data": {"height": 4},
///                 "geometry": <node>}],
///    "assertions": [["a", "p", "b"]]}
///
/// Geometry nodes are {"prim": "box" | "sphere" | "capsule" | "slab" | "convex" |
/// "line" | "plane", ...} or {"op": "union" | "intersection" | "difference" |
/// "complement" | "clip", "args": [<node>, ...]}; clip takes a "plane"
/// {"normal", "offset"}. Every geometry must be non-empty at epsilon and keep
/// epsilon clearance from the universe boundary. Throws SceneError.
Scene parse_scene(std::string_view json_text, const SceneOptions& options = {});
Scene load_scene(const std::filesystem::path& path, const SceneOptions& options = {});

/// Knowledge base with the topo: properties, the scene's declarations,
/// individuals and assertions.
KnowledgeBase build_knowledge_base(const Scene& scene, CharacteristicsProfile profile);

/// Seeded random axis-aligned boxes inside [0, universe_size]^3.
struct BoxSceneConfig {
  std::size_t count = 0;
  std::uint64_t seed = 1;
  double min_edge = 0.5;
  double max_edge = 2.0;
  double universe_size = 100.0;
  /// Minimum gap to the universe boundary; <= 0 selects 4 * default epsilon.
  double clearance = 0.0;
  std::string class_name = "Vertical_BoundingBox";
};

/// Ids are zero-padded ("b0007") so lexicographic and numeric order agree.
/// Throws ArgumentError for configurations that cannot honour the clearance.
Scene generate_box_scene(const BoxSceneConfig& config);

/// Scene document for a generated box scene.
std::string box_scene_json(const BoxSceneConfig& config);

}  // namespace csgtopo
