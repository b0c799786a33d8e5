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

#include "csgtopo/scene.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "csgtopo/error.hpp"

namespace csgtopo {
namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(const Universe& universe, double delta) : universe_(universe), delta_(delta) {}

  Solid node(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "geometry node must be an object");
    const bool prim = j.contains("prim");
    const bool op = j.contains("op");
    if (prim == op) fail(where, "geometry node needs exactly one of \"prim\" or \"op\"");
    return prim ? primitive(j, where) : operation(j, where);
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& message) {
    throw SceneError(where + ": " + message);
  }

  static double number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(where, std::string("missing \"") + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_number()) fail(where, std::string("\"") + key + "\" must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where, std::string("\"") + key + "\" must be finite");
    return x;
  }

  static Vec3 vec(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(where, std::string("missing \"") + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 3 ||
        !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); })) {
      fail(where, std::string("\"") + key + "\" must be an array of 3 numbers");
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  }

  static Halfspace halfspace(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "half-space must be an object");
    return {vec(j, "normal", where), number(j, "offset", where)};
  }

 private:
  Solid primitive(const json& j, const std::string& where) {
    const std::string kind = j.at("prim").is_string() ? j.at("prim").get<std::string>() : "";
    try {
      if (kind == "box") return Solid::box(universe_, vec(j, "min", where), vec(j, "max", where));
      if (kind == "sphere") {
        return Solid::sphere(universe_, vec(j, "center", where), number(j, "radius", where));
      }
      if (kind == "capsule") {
        return Solid::capsule(universe_, vec(j, "p0", where), vec(j, "p1", where),
                              number(j, "radius", where));
      }
      if (kind == "slab") {
        return Solid::slab(universe_, vec(j, "point", where), vec(j, "normal", where),
                           number(j, "half_thickness", where));
      }
      if (kind == "convex") {
        if (!j.contains("halfspaces") || !j.at("halfspaces").is_array()) {
          fail(where, "convex needs a \"halfspaces\" array");
        }
        std::vector<Halfspace> planes;
        for (const auto& h : j.at("halfspaces")) planes.push_back(halfspace(h, where));
        return Solid::convex(universe_, std::move(planes));
      }
      if (kind == "line") {
        const double d = j.contains("delta") ? number(j, "delta", where) : delta_;
        return thicken_line(universe_, vec(j, "p0", where), vec(j, "p1", where), d);
      }
      if (kind == "plane") {
        const double d = j.contains("delta") ? number(j, "delta", where) : delta_;
        return thicken_plane(universe_, vec(j, "point", where), vec(j, "normal", where), d);
      }
    } catch (const ArgumentError& e) {
      fail(where, e.what());
    }
    fail(where, "unknown primitive \"" + kind + "\"");
  }

  Solid operation(const json& j, const std::string& where) {
    const std::string kind = j.at("op").is_string() ? j.at("op").get<std::string>() : "";
    if (!j.contains("args") || !j.at("args").is_array()) fail(where, "operation needs an \"args\" array");
    std::vector<Solid> args;
    const auto& list = j.at("args");
    for (std::size_t i = 0; i < list.size(); ++i) {
      args.push_back(node(list[i], where + "/" + kind + "[" + std::to_string(i) + "]"));
    }
    auto arity = [&](std::size_t n) {
      if (args.size() != n) {
        fail(where, kind + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
      }
    };
    try {
      if (kind == "union" || kind == "intersection") {
        if (args.size() < 2) fail(where, kind + " takes at least 2 arguments");
        return kind == "union" ? unite(std::move(args)) : intersect(std::move(args));
      }
      if (kind == "difference") {
        arity(2);
        return subtract(args[0], args[1]);
      }
      if (kind == "complement") {
        arity(1);
        return complement(args[0]);
      }
      if (kind == "clip") {
        arity(1);
        if (!j.contains("plane")) fail(where, "clip needs a \"plane\"");
        return clip(args[0], halfspace(j.at("plane"), where));
      }
    } catch (const ArgumentError& e) {
      fail(where, e.what());
    }
    fail(where, "unknown operation \"" + kind + "\"");
  }

  const Universe& universe_;
  double delta_;
};

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) Reader::fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& s : j) {
    if (!s.is_string() || s.get<std::string>().empty()) {
      Reader::fail(where, "expected an array of non-empty strings");
    }
    out.push_back(s.get<std::string>());
  }
  return out;
}

Scene read_scene(const json& doc, const SceneOptions& options) {
  if (!doc.is_object()) throw SceneError("scene: document must be a JSON object");
  if (!doc.contains("universe")) throw SceneError("scene: missing \"universe\"");
  const auto& u = doc.at("universe");
  if (!u.is_object()) throw SceneError("universe: must be an object");
  Scene scene;
  try {
    scene.universe = Universe(Reader::vec(u, "min", "universe"), Reader::vec(u, "max", "universe"));
  } catch (const ArgumentError& e) {
    throw SceneError(std::string("universe: ") + e.what());
  }
  const double eps = options.epsilon > 0 ? options.epsilon : scene.universe.default_epsilon();
  const double delta = options.delta > 0 ? options.delta : scene.universe.default_delta();

  if (doc.contains("properties")) {
    const auto& props = doc.at("properties");
    if (!props.is_array()) throw SceneError("properties: must be an array");
    for (const auto& p : props) {
      if (!p.is_object() || !p.contains("name") || !p.at("name").is_string()) {
        throw SceneError("properties: each entry needs a string \"name\"");
      }
      PropertyDecl decl;
      decl.name = p.at("name").get<std::string>();
      const std::string where = "property '" + decl.name + "'";
      if (p.contains("characteristics")) {
        for (const auto& c : string_list(p.at("characteristics"), where)) {
          const auto parsed = parse_characteristic(c);
          if (!parsed) Reader::fail(where, "unknown characteristic \"" + c + "\"");
          decl.characteristics.insert(*parsed);
        }
      }
      if (p.contains("inverse_of")) {
        if (!p.at("inverse_of").is_string()) Reader::fail(where, "\"inverse_of\" must be a string");
        decl.inverse_of = p.at("inverse_of").get<std::string>();
      }
      scene.properties.push_back(std::move(decl));
    }
  }

  if (!doc.contains("objects") || !doc.at("objects").is_array()) {
    throw SceneError("scene: missing \"objects\" array");
  }
  Reader reader(scene.universe, delta);
  std::set<std::string> ids;
  for (const auto& o : doc.at("objects")) {
    if (!o.is_object() || !o.contains("id") || !o.at("id").is_string() ||
        o.at("id").get<std::string>().empty()) {
      throw SceneError("objects: each object needs a non-empty string \"id\"");
    }
    SceneObject obj;
    obj.id = o.at("id").get<std::string>();
    const std::string where = "object '" + obj.id + "'";
    if (!ids.insert(obj.id).second) Reader::fail(where, "duplicate id");
    if (o.contains("classes")) obj.classes = string_list(o.at("classes"), where + " classes");
    if (o.contains("data")) {
      const auto& data = o.at("data");
      if (!data.is_object()) Reader::fail(where, "\"data\" must be an object");
      for (const auto& [key, value] : data.items()) {
        if (value.is_number()) {
          obj.data.emplace(key, value.get<double>());
        } else if (value.is_string()) {
          obj.data.emplace(key, value.get<std::string>());
        } else {
          Reader::fail(where, "data value \"" + key + "\" must be a number or a string");
        }
      }
    }
    if (o.contains("geometry")) {
      Solid solid = reader.node(o.at("geometry"), where);
      try {
        if (is_empty(solid, eps)) Reader::fail(where, "geometry is empty at the validation resolution");
        if (touches_universe_boundary(solid, eps, eps)) {
          Reader::fail(where, "geometry is not strictly inside the universe");
        }
      } catch (const ArgumentError& e) {
        Reader::fail(where, e.what());
      }
      obj.geometry = std::move(solid);
    }
    scene.objects.push_back(std::move(obj));
  }

  if (doc.contains("assertions")) {
    const auto& list = doc.at("assertions");
    if (!list.is_array()) throw SceneError("assertions: must be an array");
    for (const auto& a : list) {
      const auto parts = string_list(a, "assertions");
      if (parts.size() != 3) throw SceneError("assertions: each entry is [subject, property, object]");
      for (const auto& id : {parts[0], parts[2]}) {
        if (ids.count(id) == 0) throw SceneError("assertions: unknown individual '" + id + "'");
      }
      scene.assertions.push_back({parts[0], parts[1], parts[2]});
    }
  }
  return scene;
}

std::string padded(std::size_t i, std::size_t count) {
  const std::size_t width = std::max<std::size_t>(1, std::to_string(count > 0 ? count - 1 : 0).size());
  std::string digits = std::to_string(i);
  return "b" + std::string(width - digits.size(), '0') + digits;
}

std::vector<Aabb> generate_boxes(const BoxSceneConfig& config, double clearance) {
  if (!(config.min_edge > 0) || config.max_edge < config.min_edge) {
    throw ArgumentError("box scene: edge range must satisfy 0 < min_edge <= max_edge");
  }
  if (config.max_edge + 2 * clearance >= config.universe_size) {
    throw ArgumentError("box scene: boxes cannot keep the clearance inside the universe");
  }
  std::mt19937_64 rng(config.seed);
  // Top 53 bits; unlike the standard distributions this is identical everywhere.
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  constexpr int kRetries = 1000;
  std::vector<Aabb> boxes;
  boxes.reserve(config.count);
  for (std::size_t i = 0; i < config.count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kRetries && !placed; ++attempt) {
      Aabb box;
      placed = true;
      for (int axis = 0; axis < 3; ++axis) {
        const double edge = config.min_edge + unit() * (config.max_edge - config.min_edge);
        const double lo = unit() * (config.universe_size - edge);
        const double hi = lo + edge;
        if (lo < clearance || hi > config.universe_size - clearance) placed = false;
        (axis == 0 ? box.min.x : axis == 1 ? box.min.y : box.min.z) = lo;
        (axis == 0 ? box.max.x : axis == 1 ? box.max.y : box.max.z) = hi;
      }
      if (placed) boxes.push_back(box);
    }
    if (!placed) throw ArgumentError("box scene: clearance violated after repeated regeneration");
  }
  return boxes;
}

double clearance_for(const BoxSceneConfig& config, const Universe& universe) {
  return config.clearance > 0 ? config.clearance : 4 * universe.default_epsilon();
}

}  // namespace

Scene parse_scene(std::string_view json_text, const SceneOptions& options) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw SceneError(std::string("scene: invalid JSON: ") + e.what());
  }
  try {
    return read_scene(doc, options);
  } catch (const json::exception& e) {
    throw SceneError(std::string("scene: ") + e.what());
  }
}

Scene load_scene(const std::filesystem::path& path, const SceneOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SceneError("cannot read scene file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scene(text.str(), options);
}

KnowledgeBase build_knowledge_base(const Scene& scene, CharacteristicsProfile profile) {
  KnowledgeBase kb;
  declare_topology_properties(kb, profile);
  try {
    for (const auto& decl : scene.properties) kb.declare_property(decl);
    for (const auto& o : scene.objects) {
      Individual ind;
      ind.id = o.id;
      ind.classes.insert(o.classes.begin(), o.classes.end());
      ind.data = o.data;
      ind.geometry = o.geometry;
      kb.add_individual(std::move(ind));
    }
    for (const auto& a : scene.assertions) kb.assert_property(a.subject, a.property, a.object);
  } catch (const Error& e) {
    throw SceneError(e.what());
  }
  return kb;
}

Scene generate_box_scene(const BoxSceneConfig& config) {
  Scene scene;
  const double size = config.universe_size;
  scene.universe = Universe({0, 0, 0}, {size, size, size});
  const auto boxes = generate_boxes(config, clearance_for(config, scene.universe));
  scene.objects.reserve(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    SceneObject obj;
    obj.id = padded(i, boxes.size());
    obj.classes = {config.class_name};
    obj.geometry = Solid::box(scene.universe, boxes[i].min, boxes[i].max);
    scene.objects.push_back(std::move(obj));
  }
  return scene;
}

std::string box_scene_json(const BoxSceneConfig& config) {
  const double size = config.universe_size;
  const Universe universe({0, 0, 0}, {size, size, size});
  const auto boxes = generate_boxes(config, clearance_for(config, universe));
  json objects = json::array();
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    objects.push_back({{"id", padded(i, boxes.size())},
                       {"classes", json::array({config.class_name})},
                       {"geometry",
                        {{"prim", "box"},
                         {"min", {b.min.x, b.min.y, b.min.z}},
                         {"max", {b.max.x, b.max.y, b.max.z}}}}});
  }
  json doc = {{"universe", {{"min", {0.0, 0.0, 0.0}}, {"max", {size, size, size}}}},
              {"objects", std::move(objects)}};
  return doc.dump(1) + "\n";
}

}  // namespace csgtopo
