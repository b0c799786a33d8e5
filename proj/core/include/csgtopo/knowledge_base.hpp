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

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "csgtopo/geometry.hpp"
#include "csgtopo/topology.hpp"

namespace csgtopo {

/// Interned string handle.
using Sym = std::uint32_t;

class SymbolTable {
 public:
  SymbolTable() = default;
  SymbolTable(const SymbolTable& other);
  SymbolTable& operator=(const SymbolTable& other);
  SymbolTable(SymbolTable&&) noexcept = default;
  SymbolTable& operator=(SymbolTable&&) noexcept = default;

  Sym intern(std::string_view text);
  std::optional<Sym> find(std::string_view text) const;
  const std::string& name(Sym sym) const { return names_[sym]; }
  std::size_t size() const { return names_.size(); }

 private:
  std::deque<std::string> names_;
  std::unordered_map<std::string_view, Sym> index_;
};

/// Data property value as read from a scene.
using Literal = std::variant<double, std::string>;

/// Bound value of a rule variable, or a literal in a rule.
struct Value {
  enum class Kind : std::uint8_t { kIndividual, kNumber, kString };

  Kind kind = Kind::kIndividual;
  Sym sym = 0;          // individual id, string text, or number spelling
  double number = 0.0;  // meaningful for kNumber

  friend bool operator==(const Value& a, const Value& b) {
    if (a.kind != b.kind) return false;
    return a.kind == Kind::kNumber ? a.number == b.number : a.sym == b.sym;
  }
};

/// Shortest round-trip spelling of a number.
std::string format_number(double value);

struct Individual {
  std::string id;
  std::set<std::string> classes;
  std::map<std::string, Literal> data;
  std::optional<Solid> geometry;
};

enum class Characteristic : std::uint8_t {
  kTransitive,
  kSymmetric,
  kAsymmetric,
  kFunctional,
  kReflexive,
  kIrreflexive,
};

std::string_view to_string(Characteristic c);
std::optional<Characteristic> parse_characteristic(std::string_view name);

struct PropertyDecl {
  std::string name;
  std::set<Characteristic> characteristics;
  std::optional<std::string> inverse_of;

  bool has(Characteristic c) const { return characteristics.count(c) != 0; }
};

struct Provenance {
  enum class Kind : std::uint8_t { kAsserted, kComputed, kInferred };

  Kind kind = Kind::kAsserted;
  std::string source;  // rule id or characteristic, for kInferred

  static Provenance asserted() { return {}; }
  static Provenance computed() { return {Kind::kComputed, {}}; }
  static Provenance inferred(std::string source) { return {Kind::kInferred, std::move(source)}; }

  /// "asserted", "computed", "inferred(<source>)".
  std::string to_string() const;

  /// Merge order: asserted < computed < inferred, inferred sources
  /// lexicographically. A fact keeps the least provenance it was derived with.
  friend auto operator<=>(const Provenance&, const Provenance&) = default;
};

/// Name of the knowledge-base property for a relation: "topo:<token>".
std::string relation_property(TopoRelation relation);

/// Knowledge base of individuals, class memberships and property assertions.
///
/// Not internally synchronized: mutation requires exclusive access; const
/// member functions may run concurrently with each other.
class KnowledgeBase {
 public:
  /// Provenance as stored: the inferred source is interned.
  struct StoredProvenance {
    Provenance::Kind kind = Provenance::Kind::kAsserted;
    Sym source = 0;
  };

  struct FactInfo {
    StoredProvenance provenance;
    std::uint32_t stamp = 0;
  };

  struct Edge {
    Sym node;
    std::uint32_t stamp;
  };

  struct PropertyTable {
    std::unordered_map<std::uint64_t, FactInfo> facts;
    std::unordered_map<Sym, std::vector<Edge>> out;
    std::unordered_map<Sym, std::vector<Edge>> in;
  };

  struct ClassTable {
    std::unordered_map<Sym, FactInfo> members;
    std::vector<Edge> order;
  };

  using DataTable = std::unordered_map<Sym, Value>;

  static std::uint64_t key(Sym s, Sym o) { return (std::uint64_t{s} << 32) | o; }

  KnowledgeBase();

  // Individuals.
  void add_individual(Individual individual);
  bool has_individual(std::string_view id) const;
  const Individual& individual(std::string_view id) const;
  const Individual* individual(Sym id) const;
  std::size_t individual_count() const { return individuals_.size(); }
  /// Ids in lexicographic order.
  std::vector<std::string> individual_ids() const;
  /// Individual symbols in lexicographic id order.
  std::vector<Sym> individual_syms() const;

  // Property declarations.
  void declare_property(const PropertyDecl& decl);
  const PropertyDecl* find_property(std::string_view name) const;
  const PropertyDecl* find_property(Sym name) const;
  std::vector<PropertyDecl> declarations() const;

  // Facts.
  bool assert_class(std::string_view id, std::string_view class_name,
                    const Provenance& provenance = Provenance::asserted());
  bool assert_property(std::string_view subject, std::string_view property,
                       std::string_view object,
                       const Provenance& provenance = Provenance::asserted());
  bool has_class(std::string_view id, std::string_view class_name) const;
  bool has_property(std::string_view subject, std::string_view property,
                    std::string_view object) const;
  std::optional<Provenance> provenance(std::string_view subject, std::string_view property,
                                       std::string_view object) const;

  /// Removes an asserted property fact. Inferred consequences are kept; the
  /// knowledge base is flagged as needing re-saturation.
  bool retract(std::string_view subject, std::string_view property, std::string_view object);
  bool needs_saturation() const { return needs_saturation_; }
  void mark_saturated() { needs_saturation_ = false; }

  /// Number of property assertions (class memberships excluded).
  std::size_t assertion_count() const { return assertion_count_; }
  std::size_t membership_count() const { return membership_count_; }

  /// Stores a computed relation between two individuals as r(a, b) and
  /// inverse(r)(b, a) with provenance "computed".
  void record_relation(std::string_view a, std::string_view b, TopoRelation relation);
  std::optional<TopoRelation> computed_relation(std::string_view a, std::string_view b) const;

  // Symbol-level interface used by the saturator and the rule engine.
  SymbolTable& symbols() { return symbols_; }
  const SymbolTable& symbols() const { return symbols_; }
  Sym intern(std::string_view text) { return symbols_.intern(text); }

  bool add_fact(Sym subject, Sym property, Sym object, StoredProvenance provenance);
  bool add_member(Sym class_name, Sym individual, StoredProvenance provenance);
  bool has_fact(Sym subject, Sym property, Sym object) const;
  bool has_member(Sym class_name, Sym individual) const;
  void record_relation(Sym a, Sym b, TopoRelation relation);
  std::optional<TopoRelation> computed_relation(Sym a, Sym b) const;

  const PropertyTable* property_table(Sym property) const;
  const ClassTable* class_table(Sym class_name) const;
  const DataTable* data_table(Sym property) const;
  const std::unordered_map<Sym, PropertyTable>& property_tables() const { return properties_; }
  const std::unordered_map<Sym, ClassTable>& class_tables() const { return classes_; }
  const std::unordered_map<Sym, DataTable>& data_tables() const { return data_; }

  /// Facts added from now on carry this stamp (used for semi-naive rounds).
  std::uint32_t stamp() const { return stamp_; }
  void set_stamp(std::uint32_t stamp) { stamp_ = stamp; }

  StoredProvenance store(const Provenance& provenance);
  Provenance load(StoredProvenance provenance) const;
  /// True when `a` should replace `b` under the merge order.
  bool precedes(StoredProvenance a, StoredProvenance b) const;

  Sym rdf_type() const { return rdf_type_; }

 private:
  Sym require_individual(std::string_view id) const;

  SymbolTable symbols_;
  std::unordered_map<Sym, Individual> individuals_;
  std::map<std::string, PropertyDecl, std::less<>> declarations_;
  std::unordered_map<Sym, PropertyTable> properties_;
  std::unordered_map<Sym, ClassTable> classes_;
  std::unordered_map<Sym, DataTable> data_;
  std::unordered_map<std::uint64_t, TopoRelation> relations_;
  std::size_t assertion_count_ = 0;
  std::size_t membership_count_ = 0;
  std::uint32_t stamp_ = 0;
  bool needs_saturation_ = false;
  Sym rdf_type_ = 0;
};

// Characteristic profiles for the topo: properties.

enum class CharacteristicsProfile : std::uint8_t {
  /// Characteristics exactly as tabulated with the relation definitions,
  /// including a transitive disjoint.
  kPaper,
  /// Same, but disjoint is only symmetric and irreflexive.
  kCorrected,
};

std::optional<CharacteristicsProfile> parse_profile(std::string_view name);
std::string_view to_string(CharacteristicsProfile profile);

/// Declares all eight topo: relation properties under the given profile.
void declare_topology_properties(KnowledgeBase& kb, CharacteristicsProfile profile);

// Reasoning.

/// Closes the knowledge base under symmetric, transitive, inverse and
/// reflexive declarations. New facts carry provenance inferred(<characteristic>).
void saturate(KnowledgeBase& kb);

/// Incremental form: only facts stamped >= `from_stamp` seed the worklist.
/// The remaining facts must already be closed.
void saturate_from(KnowledgeBase& kb, std::uint32_t from_stamp);

struct Violation {
  enum class Kind : std::uint8_t { kIrreflexive, kAsymmetric, kFunctional };

  Kind kind;
  std::string property;
  std::string subject;
  std::string object;
  std::string other;  // second object for functional, empty otherwise

  std::string to_string() const;
};

/// Irreflexive p(a,a); asymmetric p(a,b) and p(b,a) reported once per pair;
/// functional p(a,b), p(a,c) reported once per (a, {b,c}). Sorted.
std::vector<Violation> check_consistency(const KnowledgeBase& kb);

struct EnrichReport {
  struct PairError {
    std::string a;
    std::string b;
    std::string message;
  };

  std::size_t pairs = 0;
  std::size_t relate_calls = 0;
  std::vector<PairError> errors;
  /// Relation token -> number of computed assertions (both directions).
  std::map<std::string, std::size_t> counts;
};

/// Relates every unordered pair of geometry-bearing individuals once and
/// records the relation in both directions. Pairs whose geometry fails are
/// reported and skipped. Geometry is evaluated on `jobs` threads.
EnrichReport enrich_topology(KnowledgeBase& kb, const RelateOptions& options, int jobs = 1);

/// Sorted "subject\tproperty\tobject\tprovenance" lines, class memberships as
/// rdf:type lines, data values as numbers or double-quoted strings. Empty
/// knowledge base -> empty string.
std::string export_triples(const KnowledgeBase& kb);

/// Sorted "subject\tproperty\tobject" lines without provenance.
std::vector<std::string> fact_set(const KnowledgeBase& kb);

}  // namespace csgtopo
