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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csgtopo/topology.hpp"

namespace csgtopo {

struct Term {
  enum class Kind : std::uint8_t { kVariable, kIndividual, kNumber, kString };

  Kind kind = Kind::kVariable;
  std::string text;  // variable name without '?', individual id, number spelling, string body
  double number = 0.0;

  bool is_variable() const { return kind == Kind::kVariable; }
  std::string to_string() const;
};

struct Atom {
  enum class Kind : std::uint8_t { kClass, kProperty, kBuiltin };

  Kind kind = Kind::kClass;
  std::string name;
  std::vector<Term> args;
  std::size_t line = 0;
  std::size_t column = 0;

  std::string to_string() const;
};

struct Rule {
  std::string id;
  std::vector<Atom> antecedent;
  std::vector<Atom> consequent;
  std::size_t line = 0;

  std::string to_string() const;
};

/// A rule whose consequent is a single sqwrl:select / sqwrl:selectDistinct.
struct Query {
  std::vector<Atom> antecedent;
  std::vector<std::string> select;  // variable names without '?'
  bool distinct = false;
  std::size_t line = 0;
};

/// Built-in predicates available to rules, keyed by prefixed name.
class BuiltinRegistry {
 public:
  enum class Kind : std::uint8_t { kTopological, kComparison, kSelect };

  struct Entry {
    std::string name;
    Kind kind = Kind::kComparison;
    int arity = 2;  // -1: variadic
    std::optional<TopoRelation> relation;         // kTopological
    std::function<bool(double, double)> compare;  // kComparison
    bool symmetric = false;  // truth is invariant under swapping the two arguments
  };

  /// swrl_topo:{8 relations}, swrlb:{greaterThan, lessThan, equal},
  /// sqwrl:{select, selectDistinct}.
  static const BuiltinRegistry& standard();

  void add(Entry entry);
  const Entry* find(std::string_view name) const;

  /// Prefixes reserved for built-ins; atoms using them must be registered.
  static bool reserved_prefix(std::string_view name);

 private:
  std::map<std::string, Entry, std::less<>> entries_;
};

/// Parses rules, one per line; '#' starts a comment. Accepts "∧" or "^"
/// between atoms and "->" or "→" between antecedent and consequent. Bare
/// relation names (meet, contains, ...) in property position resolve to
/// topo:<name>. Rules get ids rule-1..rule-n. Throws ParseError with the line
/// and column of the offending token or atom.
std::vector<Rule> parse_rules(std::string_view text,
                              const BuiltinRegistry& registry = BuiltinRegistry::standard());

/// Parses a single select query. Throws ParseError for syntax errors and
/// QueryError when a selected variable is not bound by the antecedent.
Query parse_query(std::string_view text,
                  const BuiltinRegistry& registry = BuiltinRegistry::standard());

}  // namespace csgtopo
