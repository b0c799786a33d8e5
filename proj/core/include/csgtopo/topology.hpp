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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "csgtopo/geometry.hpp"

namespace csgtopo {

/// Interior/exterior intersection mask, rows (A°∩B°, A°∩B⁻; A⁻∩B°, A⁻∩B⁻).
/// `true` means non-empty.
struct FourIMask {
  bool ii = false;
  bool ie = false;
  bool ei = false;
  bool ee = false;

  friend bool operator==(const FourIMask&, const FourIMask&) = default;
};

/// "(ii,ie;ei,ee)" with 0/1 digits.
std::string to_string(const FourIMask& mask);

enum class TopoRelation : std::uint8_t {
  kDisjoint,
  kContains,
  kInside,
  kEquals,
  kOverlaps,
  kMeet,
  kCovers,
  kCoveredBy,
};

inline constexpr std::array<TopoRelation, 8> kAllRelations = {
    TopoRelation::kDisjoint, TopoRelation::kContains, TopoRelation::kInside,
    TopoRelation::kEquals,   TopoRelation::kOverlaps, TopoRelation::kMeet,
    TopoRelation::kCovers,   TopoRelation::kCoveredBy,
};

/// Lower-camel relation token: "disjoint", ..., "coveredBy".
std::string_view to_string(TopoRelation relation);
std::optional<TopoRelation> parse_relation(std::string_view token);

TopoRelation inverse(TopoRelation relation);

struct RelateOptions {
  double epsilon = 0.0;
  bool refine = false;
  double delta = 0.0;

  /// Default resolution and thickening derived from the universe extent.
  static RelateOptions defaults_for(const Universe& universe, bool refine = false);
};

/// Mask from the four CSG expressions A∩B, A\B, B\A, Ā∩B̄.
/// Throws DegenerateOperandError for an empty operand and DomainError for an
/// operand that reaches the universe boundary.
FourIMask four_im_mask(const Solid& a, const Solid& b, double epsilon);

/// Base relation of a mask. Throws UnclassifiableMaskError for patterns that
/// valid operands cannot produce.
TopoRelation classify(const FourIMask& mask);

/// classify(four_im_mask(a, b)), optionally refined with a boundary shell
/// test: disjoint -> meet, contains -> covers, inside -> coveredBy.
TopoRelation relate(const Solid& a, const Solid& b, const RelateOptions& options);

}  // namespace csgtopo
