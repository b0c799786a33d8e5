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

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace csgtopo {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend Vec3 operator*(double s, Vec3 a) { return a * s; }
  friend bool operator==(Vec3 a, Vec3 b) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

/// Axis-aligned box. Empty when any min component exceeds the max component.
struct Aabb {
  Vec3 min;
  Vec3 max;

  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 size() const { return max - min; }
  double half_diagonal() const { return 0.5 * norm(size()); }
  double max_edge() const;
  bool empty() const { return min.x > max.x || min.y > max.y || min.z > max.z; }
  bool contains(Vec3 p) const;
  bool contains(const Aabb& other) const;
  bool overlaps(const Aabb& other) const;

  static Aabb hull(const Aabb& a, const Aabb& b);
  static Aabb intersection(const Aabb& a, const Aabb& b);
};

/// Bounded modelling domain. Complements are taken relative to it.
class Universe {
 public:
  Universe(Vec3 min_corner, Vec3 max_corner);

  Vec3 min_corner() const { return box_.min; }
  Vec3 max_corner() const { return box_.max; }
  const Aabb& box() const { return box_; }

  /// Longest edge of the universe box.
  double extent() const { return box_.max_edge(); }

  /// extent / 2^10
  double default_epsilon() const;
  /// 1e-3 * extent
  double default_delta() const;

  bool contains(Vec3 p) const { return box_.contains(p); }

  friend bool operator==(const Universe& a, const Universe& b) {
    return a.box_.min == b.box_.min && a.box_.max == b.box_.max;
  }

 private:
  Aabb box_;
};

/// Oriented half-space {p : dot(normal, p) < offset}; normal is unit length.
struct Halfspace {
  Vec3 normal;
  double offset = 0.0;
};

struct BoxPrimitive {
  Vec3 min;
  Vec3 max;
};

struct SpherePrimitive {
  Vec3 center;
  double radius = 0.0;
};

/// Segment p0-p1 thickened by radius (a noise-thickened line).
struct CapsulePrimitive {
  Vec3 p0;
  Vec3 p1;
  double radius = 0.0;
};

/// Plane through point with unit normal, thickened by half_thickness on both
/// sides (a noise-thickened plane). Unbounded; only meaningful inside a
/// bounded CSG expression.
struct SlabPrimitive {
  Vec3 point;
  Vec3 normal;
  double half_thickness = 0.0;
};

/// Intersection of half-spaces.
struct ConvexPrimitive {
  std::vector<Halfspace> halfspaces;
};

using Primitive = std::variant<BoxPrimitive, SpherePrimitive, CapsulePrimitive,
                               SlabPrimitive, ConvexPrimitive>;

/// Throws ArgumentError if the primitive parameters are invalid.
void validate(const Primitive& primitive);

/// Signed distance bound: negative inside, positive outside, Lipschitz <= 1.
double primitive_value(const Primitive& primitive, Vec3 p);

/// Conservative box containing the interior of the primitive, clipped to
/// `universe`. Unbounded shapes fall back to the universe box.
Aabb primitive_bounds(const Primitive& primitive, const Aabb& universe);

enum class CsgOp : std::uint8_t { kUnion, kIntersection, kDifference, kComplement, kClip };

const char* to_string(CsgOp op);

enum class CellClass : std::uint8_t { kFullIn, kFullOut, kMixed };

const char* to_string(CellClass cell);

/// Immutable CSG expression over primitives inside a Universe. Copies share
/// the underlying tree, so passing a Solid by value is cheap and thread-safe.
class Solid {
 public:
  static Solid primitive(const Universe& universe, Primitive primitive);

  static Solid box(const Universe& universe, Vec3 min, Vec3 max);
  static Solid sphere(const Universe& universe, Vec3 center, double radius);
  static Solid capsule(const Universe& universe, Vec3 p0, Vec3 p1, double radius);
  static Solid slab(const Universe& universe, Vec3 point, Vec3 normal, double half_thickness);
  static Solid convex(const Universe& universe, std::vector<Halfspace> halfspaces);

  const Universe& universe() const;

  /// Conservative axis-aligned bound of the interior, clipped to the universe.
  /// May be empty.
  const Aabb& bounds() const;

  bool is_leaf() const;
  CsgOp op() const;
  std::span<const Solid> children() const;
  const Primitive& leaf() const;
  const Halfspace& clip_plane() const;

  /// Unchecked field evaluation; prefer signed_value() for untrusted points.
  double value(Vec3 p) const;

  /// Number of primitives in the tree.
  std::size_t primitive_count() const;

  bool same_tree(const Solid& other) const { return node_ == other.node_; }

  struct Node;

 private:
  explicit Solid(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  friend Solid unite(std::vector<Solid> operands);
  friend Solid intersect(std::vector<Solid> operands);
  friend Solid subtract(const Solid& a, const Solid& b);
  friend Solid complement(const Solid& a);
  friend Solid clip(const Solid& a, Halfspace plane);

  std::shared_ptr<const Node> node_;
};

/// n-ary union (n >= 2).
Solid unite(std::vector<Solid> operands);
inline Solid unite(const Solid& a, const Solid& b) { return unite(std::vector<Solid>{a, b}); }

/// n-ary intersection (n >= 2).
Solid intersect(std::vector<Solid> operands);
inline Solid intersect(const Solid& a, const Solid& b) {
  return intersect(std::vector<Solid>{a, b});
}

/// a minus b.
Solid subtract(const Solid& a, const Solid& b);

/// Universe minus a.
Solid complement(const Solid& a);

/// a restricted to the half-space (the Clipped_by operator).
Solid clip(const Solid& a, Halfspace plane);

/// Field value of the solid at p: union -> min, intersection -> max,
/// difference -> max(a, -b), complement -> negation, clip -> max with the
/// half-space distance. Throws DomainError when p is outside the universe.
double signed_value(const Solid& solid, Vec3 p);

/// Conservative cell test: FULL_IN if v(center) < -R, FULL_OUT if v > R,
/// else MIXED, with R the half diagonal. Throws DomainError when the cell is
/// not inside the universe.
CellClass classify_cell(const Solid& solid, const Aabb& cell);

/// Maximum octree subdivision depth.
inline constexpr int kMaxOctreeDepth = 12;

/// Regularized emptiness at resolution epsilon: false as soon as an octree
/// cell is proven fully inside the solid; true when every cell is either
/// proven outside or smaller than epsilon. Touching contacts count as empty.
/// Throws ArgumentError when epsilon <= 0 or epsilon < extent / 2^12.
bool is_empty(const Solid& solid, double epsilon);

/// Capsule of radius delta around the segment p0-p1.
Solid thicken_line(const Universe& universe, Vec3 p0, Vec3 p1, double delta);

/// Slab of half-thickness delta around the plane.
Solid thicken_plane(const Universe& universe, Vec3 point, Vec3 normal, double delta);

/// True when {p : |f_a(p)| <= delta and |f_b(p)| <= delta} contains an octree
/// cell at resolution epsilon, i.e. the two boundaries come within delta of
/// each other.
bool shell_contact(const Solid& a, const Solid& b, double delta, double epsilon);

/// True when the interior of the solid reaches within `margin` of the
/// universe boundary, judged at resolution epsilon: anything within
/// margin + 2 epsilon may be reported.
bool touches_universe_boundary(const Solid& solid, double margin, double epsilon);

}  // namespace csgtopo
