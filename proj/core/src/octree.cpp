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

// Adaptive octree search shared by the emptiness, shell-contact and
// boundary-touch tests.

#include <algorithm>
#include <array>
#include <cmath>

#include "csgtopo/error.hpp"
#include "csgtopo/geometry.hpp"

namespace csgtopo {

namespace {

template <class Field>
class CellSearch {
 public:
  CellSearch(const Aabb& prune_bound, double epsilon, Field field)
      : bound_(prune_bound), epsilon_(epsilon), field_(std::move(field)) {}

  // True when some cell reachable from `root` is proven fully inside the
  // region {field < 0}.
  bool find_full_in(const Aabb& root) {
    if (bound_.empty() || !root.overlaps(bound_)) return false;
    return descend(root, 0, field_(root.center()));
  }

 private:
  struct Child {
    Aabb cell;
    double value;
  };

  bool descend(const Aabb& cell, int depth, double value) {
    const double r = cell.half_diagonal();
    if (value < -r) return true;
    if (value > r) return false;
    if (depth >= kMaxOctreeDepth || cell.max_edge() < epsilon_) return false;

    const Vec3 mid = cell.center();
    std::array<Child, 8> children;
    std::size_t count = 0;
    for (int octant = 0; octant < 8; ++octant) {
      Aabb child = cell;
      for (int axis = 0; axis < 3; ++axis) {
        if (octant & (1 << axis)) {
          child.min[axis] = mid[axis];
        } else {
          child.max[axis] = mid[axis];
        }
      }
      if (!child.overlaps(bound_)) continue;
      children[count++] = {child, field_(child.center())};
    }
    // Most promising cells first so non-empty regions are witnessed early.
    std::sort(children.begin(), children.begin() + count,
              [](const Child& a, const Child& b) { return a.value < b.value; });
    for (std::size_t i = 0; i < count; ++i) {
      if (descend(children[i].cell, depth + 1, children[i].value)) return true;
    }
    return false;
  }

  Aabb bound_;
  double epsilon_;
  Field field_;
};

template <class Field>
bool find_full_in(const Aabb& root, const Aabb& bound, double epsilon, Field field) {
  return CellSearch<Field>(bound, epsilon, std::move(field)).find_full_in(root);
}

void check_resolution(const Universe& universe, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ArgumentError("resolution epsilon must be positive");
  }
  const double finest = universe.extent() / static_cast<double>(1 << kMaxOctreeDepth);
  if (epsilon < finest * (1.0 - 1e-12)) {
    throw ArgumentError("resolution epsilon is below extent / 2^" +
                        std::to_string(kMaxOctreeDepth));
  }
}

double box_field(const Aabb& box, Vec3 p) {
  return primitive_value(BoxPrimitive{box.min, box.max}, p);
}

}  // namespace

bool is_empty(const Solid& solid, double epsilon) {
  const Universe& u = solid.universe();
  check_resolution(u, epsilon);
  return !find_full_in(u.box(), solid.bounds(), epsilon,
                       [&solid](Vec3 p) { return solid.value(p); });
}

bool shell_contact(const Solid& a, const Solid& b, double delta, double epsilon) {
  if (!(a.universe() == b.universe())) {
    throw ArgumentError("shell_contact: operands belong to different universes");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ArgumentError("shell_contact: delta must be positive");
  }
  const Universe& u = a.universe();
  check_resolution(u, epsilon);
  // The field of a Lipschitz bound may stay below delta far from the surface,
  // so the shell is not confined to the solids' bounds; search the universe.
  return find_full_in(u.box(), u.box(), epsilon, [&a, &b, delta](Vec3 p) {
    return std::max(std::abs(a.value(p)) - delta, std::abs(b.value(p)) - delta);
  });
}

bool touches_universe_boundary(const Solid& solid, double margin, double epsilon) {
  const Universe& u = solid.universe();
  check_resolution(u, epsilon);
  // The band must be wide enough to hold a FULL_IN cell, so it gets 2 epsilon extra.
  const double reach = margin + 2 * epsilon;
  const Vec3 m{reach, reach, reach};
  const Aabb inner{u.min_corner() + m, u.max_corner() - m};
  const Aabb& b = solid.bounds();
  if (b.empty()) return false;
  if (b.min.x > inner.min.x && b.min.y > inner.min.y && b.min.z > inner.min.z &&
      b.max.x < inner.max.x && b.max.y < inner.max.y && b.max.z < inner.max.z) {
    return false;
  }
  return find_full_in(u.box(), b, epsilon, [&solid, inner](Vec3 p) {
    return std::max(solid.value(p), -box_field(inner, p));
  });
}

}  // namespace csgtopo
