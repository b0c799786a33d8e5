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

#include "csgtopo/geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "csgtopo/error.hpp"

namespace csgtopo {

namespace {

constexpr double kUnitTolerance = 1e-6;

bool finite(Vec3 v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

void require_unit(Vec3 n, const char* what) {
  if (!finite(n) || std::abs(norm(n) - 1.0) > kUnitTolerance) {
    throw ArgumentError(std::string(what) + ": normal must have unit length");
  }
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ArgumentError(std::string(what) + " must be positive and finite");
  }
}

// Index of the axis a unit normal is aligned with, sign in `sign`; -1 if the
// normal is oblique.
int aligned_axis(Vec3 n, double& sign) {
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(std::abs(n[axis]) - 1.0) <= kUnitTolerance) {
      sign = n[axis] > 0.0 ? 1.0 : -1.0;
      return axis;
    }
  }
  return -1;
}

// Restrict `box` to the closure of {p : dot(n, p) < offset} when the normal is
// axis aligned.
void restrict_to_halfspace(Aabb& box, const Halfspace& h) {
  double sign = 0.0;
  const int axis = aligned_axis(h.normal, sign);
  if (axis < 0) return;
  if (sign > 0.0) {
    box.max[axis] = std::min(box.max[axis], h.offset);
  } else {
    box.min[axis] = std::max(box.min[axis], -h.offset);
  }
}

double box_value(const BoxPrimitive& b, Vec3 p) {
  double outside = 0.0;
  double inside = -std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double c = 0.5 * (b.min[axis] + b.max[axis]);
    const double h = 0.5 * (b.max[axis] - b.min[axis]);
    const double q = std::abs(p[axis] - c) - h;
    if (q > 0.0) outside += q * q;
    inside = std::max(inside, q);
  }
  return outside > 0.0 ? std::sqrt(outside) : std::min(inside, 0.0);
}

double capsule_value(const CapsulePrimitive& c, Vec3 p) {
  const Vec3 d = c.p1 - c.p0;
  const double t = std::clamp(dot(p - c.p0, d) / dot(d, d), 0.0, 1.0);
  return norm(p - (c.p0 + d * t)) - c.radius;
}

}  // namespace

double Aabb::max_edge() const {
  const Vec3 s = size();
  return std::max({s.x, s.y, s.z});
}

bool Aabb::contains(Vec3 p) const {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
         p.z <= max.z;
}

bool Aabb::contains(const Aabb& other) const {
  return contains(other.min) && contains(other.max);
}

bool Aabb::overlaps(const Aabb& other) const {
  return min.x < other.max.x && other.min.x < max.x && min.y < other.max.y &&
         other.min.y < max.y && min.z < other.max.z && other.min.z < max.z;
}

Aabb Aabb::hull(const Aabb& a, const Aabb& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return {{std::min(a.min.x, b.min.x), std::min(a.min.y, b.min.y), std::min(a.min.z, b.min.z)},
          {std::max(a.max.x, b.max.x), std::max(a.max.y, b.max.y), std::max(a.max.z, b.max.z)}};
}

Aabb Aabb::intersection(const Aabb& a, const Aabb& b) {
  return {{std::max(a.min.x, b.min.x), std::max(a.min.y, b.min.y), std::max(a.min.z, b.min.z)},
          {std::min(a.max.x, b.max.x), std::min(a.max.y, b.max.y), std::min(a.max.z, b.max.z)}};
}

Universe::Universe(Vec3 min_corner, Vec3 max_corner) : box_{min_corner, max_corner} {
  if (!finite(min_corner) || !finite(max_corner) || !(min_corner.x < max_corner.x) ||
      !(min_corner.y < max_corner.y) || !(min_corner.z < max_corner.z)) {
    throw ArgumentError("universe: min_corner must be component-wise below max_corner");
  }
}

double Universe::default_epsilon() const { return extent() / 1024.0; }

double Universe::default_delta() const { return 1e-3 * extent(); }

void validate(const Primitive& primitive) {
  std::visit(
      [](const auto& prim) {
        using T = std::decay_t<decltype(prim)>;
        if constexpr (std::is_same_v<T, BoxPrimitive>) {
          if (!finite(prim.min) || !finite(prim.max) || !(prim.min.x < prim.max.x) ||
              !(prim.min.y < prim.max.y) || !(prim.min.z < prim.max.z)) {
            throw ArgumentError("box: min must be component-wise below max");
          }
        } else if constexpr (std::is_same_v<T, SpherePrimitive>) {
          if (!finite(prim.center)) throw ArgumentError("sphere: center must be finite");
          require_positive(prim.radius, "sphere: radius");
        } else if constexpr (std::is_same_v<T, CapsulePrimitive>) {
          if (!finite(prim.p0) || !finite(prim.p1)) {
            throw ArgumentError("capsule: endpoints must be finite");
          }
          if (prim.p0 == prim.p1) throw ArgumentError("capsule: degenerate segment (p0 == p1)");
          require_positive(prim.radius, "capsule: radius");
        } else if constexpr (std::is_same_v<T, SlabPrimitive>) {
          if (!finite(prim.point)) throw ArgumentError("slab: point must be finite");
          require_unit(prim.normal, "slab");
          require_positive(prim.half_thickness, "slab: half_thickness");
        } else {
          if (prim.halfspaces.empty()) throw ArgumentError("convex: needs at least one half-space");
          for (const auto& h : prim.halfspaces) {
            require_unit(h.normal, "convex");
            if (!std::isfinite(h.offset)) throw ArgumentError("convex: offset must be finite");
          }
        }
      },
      primitive);
}

double primitive_value(const Primitive& primitive, Vec3 p) {
  return std::visit(
      [p](const auto& prim) -> double {
        using T = std::decay_t<decltype(prim)>;
        if constexpr (std::is_same_v<T, BoxPrimitive>) {
          return box_value(prim, p);
        } else if constexpr (std::is_same_v<T, SpherePrimitive>) {
          return norm(p - prim.center) - prim.radius;
        } else if constexpr (std::is_same_v<T, CapsulePrimitive>) {
          return capsule_value(prim, p);
        } else if constexpr (std::is_same_v<T, SlabPrimitive>) {
          return std::abs(dot(prim.normal, p - prim.point)) - prim.half_thickness;
        } else {
          double v = -std::numeric_limits<double>::infinity();
          for (const auto& h : prim.halfspaces) v = std::max(v, dot(h.normal, p) - h.offset);
          return v;
        }
      },
      primitive);
}

Aabb primitive_bounds(const Primitive& primitive, const Aabb& universe) {
  Aabb box = std::visit(
      [&universe](const auto& prim) -> Aabb {
        using T = std::decay_t<decltype(prim)>;
        if constexpr (std::is_same_v<T, BoxPrimitive>) {
          return {prim.min, prim.max};
        } else if constexpr (std::is_same_v<T, SpherePrimitive>) {
          const Vec3 r{prim.radius, prim.radius, prim.radius};
          return {prim.center - r, prim.center + r};
        } else if constexpr (std::is_same_v<T, CapsulePrimitive>) {
          const Vec3 r{prim.radius, prim.radius, prim.radius};
          const Vec3 lo{std::min(prim.p0.x, prim.p1.x), std::min(prim.p0.y, prim.p1.y),
                        std::min(prim.p0.z, prim.p1.z)};
          const Vec3 hi{std::max(prim.p0.x, prim.p1.x), std::max(prim.p0.y, prim.p1.y),
                        std::max(prim.p0.z, prim.p1.z)};
          return {lo - r, hi + r};
        } else if constexpr (std::is_same_v<T, SlabPrimitive>) {
          Aabb b = universe;
          double sign = 0.0;
          const int axis = aligned_axis(prim.normal, sign);
          if (axis >= 0) {
            b.min[axis] = prim.point[axis] - prim.half_thickness;
            b.max[axis] = prim.point[axis] + prim.half_thickness;
          }
          return b;
        } else {
          Aabb b = universe;
          for (const auto& h : prim.halfspaces) restrict_to_halfspace(b, h);
          return b;
        }
      },
      primitive);
  return Aabb::intersection(box, universe);
}

const char* to_string(CsgOp op) {
  switch (op) {
    case CsgOp::kUnion: return "union";
    case CsgOp::kIntersection: return "intersection";
    case CsgOp::kDifference: return "difference";
    case CsgOp::kComplement: return "complement";
    case CsgOp::kClip: return "clip";
  }
  return "?";
}

const char* to_string(CellClass cell) {
  switch (cell) {
    case CellClass::kFullIn: return "FULL_IN";
    case CellClass::kFullOut: return "FULL_OUT";
    case CellClass::kMixed: return "MIXED";
  }
  return "?";
}

struct Solid::Node {
  Node(const Universe& u, bool is_leaf) : universe(u), leaf(is_leaf) {}

  Universe universe;
  Aabb bounds;
  bool leaf = true;
  Primitive primitive;
  CsgOp op = CsgOp::kUnion;
  std::vector<Solid> children;
  Halfspace plane;
  std::size_t primitive_count = 0;
};

namespace {

const Universe& common_universe(std::span<const Solid> operands, const char* op) {
  const Universe& u = operands.front().universe();
  for (const auto& s : operands) {
    if (!(s.universe() == u)) {
      throw ArgumentError(std::string(op) + ": operands belong to different universes");
    }
  }
  return u;
}

std::size_t count_primitives(std::span<const Solid> operands) {
  std::size_t n = 0;
  for (const auto& s : operands) n += s.primitive_count();
  return n;
}

}  // namespace

Solid Solid::primitive(const Universe& universe, Primitive primitive) {
  validate(primitive);
  auto node = std::make_shared<Node>(universe, true);
  node->primitive = std::move(primitive);
  node->bounds = primitive_bounds(node->primitive, universe.box());
  node->primitive_count = 1;
  return Solid(std::move(node));
}

Solid Solid::box(const Universe& universe, Vec3 min, Vec3 max) {
  return primitive(universe, BoxPrimitive{min, max});
}

Solid Solid::sphere(const Universe& universe, Vec3 center, double radius) {
  return primitive(universe, SpherePrimitive{center, radius});
}

Solid Solid::capsule(const Universe& universe, Vec3 p0, Vec3 p1, double radius) {
  return primitive(universe, CapsulePrimitive{p0, p1, radius});
}

Solid Solid::slab(const Universe& universe, Vec3 point, Vec3 normal, double half_thickness) {
  return primitive(universe, SlabPrimitive{point, normal, half_thickness});
}

Solid Solid::convex(const Universe& universe, std::vector<Halfspace> halfspaces) {
  return primitive(universe, ConvexPrimitive{std::move(halfspaces)});
}

const Universe& Solid::universe() const { return node_->universe; }
const Aabb& Solid::bounds() const { return node_->bounds; }
bool Solid::is_leaf() const { return node_->leaf; }
CsgOp Solid::op() const { return node_->op; }
std::span<const Solid> Solid::children() const { return node_->children; }
const Primitive& Solid::leaf() const { return node_->primitive; }
const Halfspace& Solid::clip_plane() const { return node_->plane; }
std::size_t Solid::primitive_count() const { return node_->primitive_count; }

double Solid::value(Vec3 p) const {
  const Node& n = *node_;
  if (n.leaf) return primitive_value(n.primitive, p);
  switch (n.op) {
    case CsgOp::kUnion: {
      double v = std::numeric_limits<double>::infinity();
      for (const auto& c : n.children) v = std::min(v, c.value(p));
      return v;
    }
    case CsgOp::kIntersection: {
      double v = -std::numeric_limits<double>::infinity();
      for (const auto& c : n.children) v = std::max(v, c.value(p));
      return v;
    }
    case CsgOp::kDifference:
      return std::max(n.children[0].value(p), -n.children[1].value(p));
    case CsgOp::kComplement:
      return -n.children[0].value(p);
    case CsgOp::kClip:
      return std::max(n.children[0].value(p), dot(n.plane.normal, p) - n.plane.offset);
  }
  return 0.0;
}

Solid unite(std::vector<Solid> operands) {
  if (operands.size() < 2) throw ArgumentError("union needs at least two operands");
  const Universe& u = common_universe(operands, "union");
  auto node = std::make_shared<Solid::Node>(u, false);
  node->op = CsgOp::kUnion;
  node->bounds = Aabb{{1, 1, 1}, {0, 0, 0}};
  for (const auto& s : operands) node->bounds = Aabb::hull(node->bounds, s.bounds());
  node->primitive_count = count_primitives(operands);
  node->children = std::move(operands);
  return Solid(std::move(node));
}

Solid intersect(std::vector<Solid> operands) {
  if (operands.size() < 2) throw ArgumentError("intersection needs at least two operands");
  const Universe& u = common_universe(operands, "intersection");
  auto node = std::make_shared<Solid::Node>(u, false);
  node->op = CsgOp::kIntersection;
  node->bounds = u.box();
  for (const auto& s : operands) node->bounds = Aabb::intersection(node->bounds, s.bounds());
  node->primitive_count = count_primitives(operands);
  node->children = std::move(operands);
  return Solid(std::move(node));
}

Solid subtract(const Solid& a, const Solid& b) {
  const Solid pair[] = {a, b};
  const Universe& u = common_universe(pair, "difference");
  auto node = std::make_shared<Solid::Node>(u, false);
  node->op = CsgOp::kDifference;
  node->bounds = a.bounds();
  node->primitive_count = a.primitive_count() + b.primitive_count();
  node->children = {a, b};
  return Solid(std::move(node));
}

Solid complement(const Solid& a) {
  auto node = std::make_shared<Solid::Node>(a.universe(), false);
  node->op = CsgOp::kComplement;
  node->bounds = a.universe().box();
  node->primitive_count = a.primitive_count();
  node->children = {a};
  return Solid(std::move(node));
}

Solid clip(const Solid& a, Halfspace plane) {
  require_unit(plane.normal, "clip");
  if (!std::isfinite(plane.offset)) throw ArgumentError("clip: offset must be finite");
  auto node = std::make_shared<Solid::Node>(a.universe(), false);
  node->op = CsgOp::kClip;
  node->plane = plane;
  node->bounds = a.bounds();
  restrict_to_halfspace(node->bounds, plane);
  node->primitive_count = a.primitive_count();
  node->children = {a};
  return Solid(std::move(node));
}

double signed_value(const Solid& solid, Vec3 p) {
  if (!solid.universe().contains(p)) {
    std::ostringstream msg;
    msg << "point (" << p.x << ", " << p.y << ", " << p.z << ") lies outside the universe";
    throw DomainError(msg.str());
  }
  return solid.value(p);
}

CellClass classify_cell(const Solid& solid, const Aabb& cell) {
  if (cell.empty() || !solid.universe().box().contains(cell)) {
    throw DomainError("cell is not inside the universe");
  }
  const double v = solid.value(cell.center());
  const double r = cell.half_diagonal();
  if (v < -r) return CellClass::kFullIn;
  if (v > r) return CellClass::kFullOut;
  return CellClass::kMixed;
}

Solid thicken_line(const Universe& universe, Vec3 p0, Vec3 p1, double delta) {
  require_positive(delta, "thicken_line: delta");
  if (p0 == p1) throw ArgumentError("thicken_line: degenerate segment (p0 == p1)");
  return Solid::capsule(universe, p0, p1, delta);
}

Solid thicken_plane(const Universe& universe, Vec3 point, Vec3 normal, double delta) {
  require_positive(delta, "thicken_plane: delta");
  require_unit(normal, "thicken_plane");
  return Solid::slab(universe, point, normal, delta);
}

}  // namespace csgtopo
