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

#include "csgtopo/topology.hpp"

#include "csgtopo/error.hpp"

namespace csgtopo {

std::string to_string(const FourIMask& mask) {
  auto bit = [](bool b) { return b ? '1' : '0'; };
  return std::string{'(', bit(mask.ii), ',', bit(mask.ie), ';', bit(mask.ei), ',', bit(mask.ee), ')'};
}

std::string_view to_string(TopoRelation relation) {
  switch (relation) {
    case TopoRelation::kDisjoint: return "disjoint";
    case TopoRelation::kContains: return "contains";
    case TopoRelation::kInside: return "inside";
    case TopoRelation::kEquals: return "equals";
    case TopoRelation::kOverlaps: return "overlaps";
    case TopoRelation::kMeet: return "meet";
    case TopoRelation::kCovers: return "covers";
    case TopoRelation::kCoveredBy: return "coveredBy";
  }
  return "?";
}

std::optional<TopoRelation> parse_relation(std::string_view token) {
  for (TopoRelation r : kAllRelations) {
    if (to_string(r) == token) return r;
  }
  return std::nullopt;
}

TopoRelation inverse(TopoRelation relation) {
  switch (relation) {
    case TopoRelation::kContains: return TopoRelation::kInside;
    case TopoRelation::kInside: return TopoRelation::kContains;
    case TopoRelation::kCovers: return TopoRelation::kCoveredBy;
    case TopoRelation::kCoveredBy: return TopoRelation::kCovers;
    default: return relation;
  }
}

RelateOptions RelateOptions::defaults_for(const Universe& universe, bool refine) {
  return {universe.default_epsilon(), refine, universe.default_delta()};
}

namespace {

void check_operand(const Solid& s, double epsilon, const char* name) {
  if (is_empty(s, epsilon)) {
    throw DegenerateOperandError(std::string("operand ") + name +
                                 " has an empty interior at the given resolution");
  }
  if (touches_universe_boundary(s, epsilon, epsilon)) {
    throw DomainError(std::string("operand ") + name + " reaches the universe boundary");
  }
}

}  // namespace

FourIMask four_im_mask(const Solid& a, const Solid& b, double epsilon) {
  if (!(a.universe() == b.universe())) {
    throw ArgumentError("four_im_mask: operands belong to different universes");
  }
  check_operand(a, epsilon, "A");
  check_operand(b, epsilon, "B");

  FourIMask mask;
  mask.ii = !is_empty(intersect(a, b), epsilon);
  mask.ie = !is_empty(subtract(a, b), epsilon);
  mask.ei = !is_empty(subtract(b, a), epsilon);
  mask.ee = !is_empty(intersect(complement(a), complement(b)), epsilon);
  return mask;
}

TopoRelation classify(const FourIMask& mask) {
  if (mask.ee) {
    if (!mask.ii && mask.ie && mask.ei) return TopoRelation::kDisjoint;
    if (mask.ii && mask.ie && !mask.ei) return TopoRelation::kContains;
    if (mask.ii && !mask.ie && mask.ei) return TopoRelation::kInside;
    if (mask.ii && !mask.ie && !mask.ei) return TopoRelation::kEquals;
    if (mask.ii && mask.ie && mask.ei) return TopoRelation::kOverlaps;
  }
  throw UnclassifiableMaskError("mask " + to_string(mask) +
                                " matches no relation (degenerate or boundary-touching operand)");
}

TopoRelation relate(const Solid& a, const Solid& b, const RelateOptions& options) {
  const TopoRelation base = classify(four_im_mask(a, b, options.epsilon));
  if (!options.refine) return base;
  switch (base) {
    case TopoRelation::kDisjoint:
    case TopoRelation::kContains:
    case TopoRelation::kInside:
      break;
    default:
      return base;
  }
  if (!shell_contact(a, b, options.delta, options.epsilon)) return base;
  switch (base) {
    case TopoRelation::kDisjoint: return TopoRelation::kMeet;
    case TopoRelation::kContains: return TopoRelation::kCovers;
    default: return TopoRelation::kCoveredBy;
  }
}

}  // namespace csgtopo
