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

#include "csgtopo/knowledge_base.hpp"

#include <algorithm>
#include <charconv>
#include <utility>

#include "csgtopo/error.hpp"
#include "parallel.hpp"

namespace csgtopo {

SymbolTable::SymbolTable(const SymbolTable& other) : names_(other.names_) {
  index_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], static_cast<Sym>(i));
}

SymbolTable& SymbolTable::operator=(const SymbolTable& other) {
  if (this != &other) *this = SymbolTable(other);
  return *this;
}

Sym SymbolTable::intern(std::string_view text) {
  if (auto it = index_.find(text); it != index_.end()) return it->second;
  const Sym sym = static_cast<Sym>(names_.size());
  names_.emplace_back(text);
  index_.emplace(names_.back(), sym);
  return sym;
}

std::optional<Sym> SymbolTable::find(std::string_view text) const {
  if (auto it = index_.find(text); it != index_.end()) return it->second;
  return std::nullopt;
}

std::string format_number(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

std::string_view to_string(Characteristic c) {
  switch (c) {
    case Characteristic::kTransitive: return "transitive";
    case Characteristic::kSymmetric: return "symmetric";
    case Characteristic::kAsymmetric: return "asymmetric";
    case Characteristic::kFunctional: return "functional";
    case Characteristic::kReflexive: return "reflexive";
    case Characteristic::kIrreflexive: return "irreflexive";
  }
  return "?";
}

std::optional<Characteristic> parse_characteristic(std::string_view name) {
  for (auto c : {Characteristic::kTransitive, Characteristic::kSymmetric, Characteristic::kAsymmetric,
                 Characteristic::kFunctional, Characteristic::kReflexive,
                 Characteristic::kIrreflexive}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string Provenance::to_string() const {
  switch (kind) {
    case Kind::kAsserted: return "asserted";
    case Kind::kComputed: return "computed";
    case Kind::kInferred: return "inferred(" + source + ")";
  }
  return "?";
}

std::string relation_property(TopoRelation relation) {
  return "topo:" + std::string(to_string(relation));
}

KnowledgeBase::KnowledgeBase() {
  symbols_.intern("");
  rdf_type_ = symbols_.intern("rdf:type");
}

void KnowledgeBase::add_individual(Individual individual) {
  if (individual.id.empty()) throw KnowledgeBaseError("individual id must not be empty");
  const Sym id = symbols_.intern(individual.id);
  if (individuals_.count(id) != 0) {
    throw KnowledgeBaseError("duplicate individual id '" + individual.id + "'");
  }
  for (const auto& c : individual.classes) {
    if (c.empty()) throw KnowledgeBaseError("empty class name on '" + individual.id + "'");
  }
  for (const auto& [name, literal] : individual.data) {
    Value value;
    if (const double* number = std::get_if<double>(&literal)) {
      value = {Value::Kind::kNumber, symbols_.intern(format_number(*number)), *number};
    } else {
      value = {Value::Kind::kString, symbols_.intern(std::get<std::string>(literal)), 0.0};
    }
    data_[symbols_.intern(name)][id] = value;
  }
  const auto classes = individual.classes;
  individuals_.emplace(id, std::move(individual));
  for (const auto& c : classes) add_member(symbols_.intern(c), id, {});
}

bool KnowledgeBase::has_individual(std::string_view id) const {
  auto sym = symbols_.find(id);
  return sym && individuals_.count(*sym) != 0;
}

const Individual& KnowledgeBase::individual(std::string_view id) const {
  return individuals_.at(require_individual(id));
}

const Individual* KnowledgeBase::individual(Sym id) const {
  auto it = individuals_.find(id);
  return it == individuals_.end() ? nullptr : &it->second;
}

std::vector<std::string> KnowledgeBase::individual_ids() const {
  std::vector<std::string> ids;
  ids.reserve(individuals_.size());
  for (const auto& [sym, ind] : individuals_) ids.push_back(ind.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<Sym> KnowledgeBase::individual_syms() const {
  std::vector<Sym> syms;
  syms.reserve(individuals_.size());
  for (const auto& [sym, ind] : individuals_) syms.push_back(sym);
  std::sort(syms.begin(), syms.end(),
            [this](Sym a, Sym b) { return symbols_.name(a) < symbols_.name(b); });
  return syms;
}

Sym KnowledgeBase::require_individual(std::string_view id) const {
  auto sym = symbols_.find(id);
  if (!sym || individuals_.count(*sym) == 0) {
    throw KnowledgeBaseError("unknown individual '" + std::string(id) + "'");
  }
  return *sym;
}

void KnowledgeBase::declare_property(const PropertyDecl& decl) {
  using C = Characteristic;
  if (decl.name.empty()) throw DeclarationError("property name must not be empty");
  if (decl.has(C::kSymmetric) && decl.has(C::kAsymmetric)) {
    throw DeclarationError(decl.name + ": symmetric and asymmetric are contradictory");
  }
  if (decl.has(C::kReflexive) && decl.has(C::kIrreflexive)) {
    throw DeclarationError(decl.name + ": reflexive and irreflexive are contradictory");
  }

  PropertyDecl merged = decl;
  if (auto it = declarations_.find(decl.name); it != declarations_.end()) {
    const PropertyDecl& prior = it->second;
    if (!prior.characteristics.empty() && prior.characteristics != decl.characteristics) {
      throw DeclarationError(decl.name + ": conflicts with an earlier declaration");
    }
    if (prior.inverse_of && decl.inverse_of && *prior.inverse_of != *decl.inverse_of) {
      throw DeclarationError(decl.name + ": already declared inverse of " + *prior.inverse_of);
    }
    if (!merged.inverse_of) merged.inverse_of = prior.inverse_of;
  }

  if (merged.inverse_of) {
    const std::string& other = *merged.inverse_of;
    if (other != merged.name) {
      auto it = declarations_.find(other);
      if (it != declarations_.end() && it->second.inverse_of &&
          *it->second.inverse_of != merged.name) {
        throw DeclarationError(other + ": already declared inverse of " +
                               *it->second.inverse_of);
      }
      if (it == declarations_.end()) {
        declarations_.emplace(other, PropertyDecl{other, {}, merged.name});
      } else {
        it->second.inverse_of = merged.name;
      }
    }
  }
  symbols_.intern(merged.name);
  if (merged.inverse_of) symbols_.intern(*merged.inverse_of);
  declarations_.insert_or_assign(merged.name, std::move(merged));
}

const PropertyDecl* KnowledgeBase::find_property(std::string_view name) const {
  auto it = declarations_.find(name);
  return it == declarations_.end() ? nullptr : &it->second;
}

const PropertyDecl* KnowledgeBase::find_property(Sym name) const {
  return find_property(symbols_.name(name));
}

std::vector<PropertyDecl> KnowledgeBase::declarations() const {
  std::vector<PropertyDecl> out;
  for (const auto& [name, decl] : declarations_) out.push_back(decl);
  return out;
}

KnowledgeBase::StoredProvenance KnowledgeBase::store(const Provenance& provenance) {
  return {provenance.kind, provenance.kind == Provenance::Kind::kInferred
                               ? symbols_.intern(provenance.source)
                               : Sym{0}};
}

Provenance KnowledgeBase::load(StoredProvenance provenance) const {
  return {provenance.kind, provenance.kind == Provenance::Kind::kInferred
                               ? symbols_.name(provenance.source)
                               : std::string()};
}

bool KnowledgeBase::precedes(StoredProvenance a, StoredProvenance b) const {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.kind != Provenance::Kind::kInferred || a.source == b.source) return false;
  return symbols_.name(a.source) < symbols_.name(b.source);
}

bool KnowledgeBase::add_fact(Sym subject, Sym property, Sym object,
                             StoredProvenance provenance) {
  PropertyTable& table = properties_[property];
  auto [it, inserted] = table.facts.try_emplace(key(subject, object), FactInfo{provenance, stamp_});
  if (!inserted) {
    if (precedes(provenance, it->second.provenance)) it->second.provenance = provenance;
    return false;
  }
  table.out[subject].push_back({object, stamp_});
  table.in[object].push_back({subject, stamp_});
  ++assertion_count_;
  return true;
}

bool KnowledgeBase::add_member(Sym class_name, Sym individual, StoredProvenance provenance) {
  ClassTable& table = classes_[class_name];
  auto [it, inserted] = table.members.try_emplace(individual, FactInfo{provenance, stamp_});
  if (!inserted) {
    if (precedes(provenance, it->second.provenance)) it->second.provenance = provenance;
    return false;
  }
  table.order.push_back({individual, stamp_});
  ++membership_count_;
  return true;
}

bool KnowledgeBase::has_fact(Sym subject, Sym property, Sym object) const {
  auto it = properties_.find(property);
  return it != properties_.end() && it->second.facts.count(key(subject, object)) != 0;
}

bool KnowledgeBase::has_member(Sym class_name, Sym individual) const {
  auto it = classes_.find(class_name);
  return it != classes_.end() && it->second.members.count(individual) != 0;
}

bool KnowledgeBase::assert_class(std::string_view id, std::string_view class_name,
                                 const Provenance& provenance) {
  if (class_name.empty()) throw KnowledgeBaseError("class name must not be empty");
  const Sym ind = require_individual(id);
  return add_member(symbols_.intern(class_name), ind, store(provenance));
}

bool KnowledgeBase::assert_property(std::string_view subject, std::string_view property,
                                    std::string_view object, const Provenance& provenance) {
  if (property.empty()) throw KnowledgeBaseError("property name must not be empty");
  const Sym s = require_individual(subject);
  const Sym o = require_individual(object);
  return add_fact(s, symbols_.intern(property), o, store(provenance));
}

bool KnowledgeBase::has_class(std::string_view id, std::string_view class_name) const {
  auto ind = symbols_.find(id);
  auto cls = symbols_.find(class_name);
  return ind && cls && has_member(*cls, *ind);
}

bool KnowledgeBase::has_property(std::string_view subject, std::string_view property,
                                 std::string_view object) const {
  auto s = symbols_.find(subject);
  auto p = symbols_.find(property);
  auto o = symbols_.find(object);
  return s && p && o && has_fact(*s, *p, *o);
}

std::optional<Provenance> KnowledgeBase::provenance(std::string_view subject,
                                                    std::string_view property,
                                                    std::string_view object) const {
  auto s = symbols_.find(subject);
  auto p = symbols_.find(property);
  auto o = symbols_.find(object);
  if (!s || !p || !o) return std::nullopt;
  if (*p == rdf_type_) {
    auto cls = classes_.find(*o);
    if (cls == classes_.end()) return std::nullopt;
    auto it = cls->second.members.find(*s);
    if (it == cls->second.members.end()) return std::nullopt;
    return load(it->second.provenance);
  }
  auto table = properties_.find(*p);
  if (table == properties_.end()) return std::nullopt;
  auto it = table->second.facts.find(key(*s, *o));
  if (it == table->second.facts.end()) return std::nullopt;
  return load(it->second.provenance);
}

bool KnowledgeBase::retract(std::string_view subject, std::string_view property,
                            std::string_view object) {
  auto s = symbols_.find(subject);
  auto p = symbols_.find(property);
  auto o = symbols_.find(object);
  if (!s || !p || !o) return false;
  auto table = properties_.find(*p);
  if (table == properties_.end()) return false;
  auto it = table->second.facts.find(key(*s, *o));
  if (it == table->second.facts.end() ||
      it->second.provenance.kind != Provenance::Kind::kAsserted) {
    return false;
  }
  table->second.facts.erase(it);
  auto erase_edge = [](std::vector<Edge>& edges, Sym node) {
    std::erase_if(edges, [node](const Edge& e) { return e.node == node; });
  };
  erase_edge(table->second.out[*s], *o);
  erase_edge(table->second.in[*o], *s);
  --assertion_count_;
  needs_saturation_ = true;
  return true;
}

void KnowledgeBase::record_relation(Sym a, Sym b, TopoRelation relation) {
  const StoredProvenance computed{Provenance::Kind::kComputed, 0};
  add_fact(a, symbols_.intern(relation_property(relation)), b, computed);
  add_fact(b, symbols_.intern(relation_property(inverse(relation))), a, computed);
  if (a <= b) {
    relations_[key(a, b)] = relation;
  } else {
    relations_[key(b, a)] = inverse(relation);
  }
}

std::optional<TopoRelation> KnowledgeBase::computed_relation(Sym a, Sym b) const {
  auto it = relations_.find(a <= b ? key(a, b) : key(b, a));
  if (it == relations_.end()) return std::nullopt;
  return a <= b ? it->second : inverse(it->second);
}

void KnowledgeBase::record_relation(std::string_view a, std::string_view b,
                                    TopoRelation relation) {
  record_relation(require_individual(a), require_individual(b), relation);
}

std::optional<TopoRelation> KnowledgeBase::computed_relation(std::string_view a,
                                                             std::string_view b) const {
  auto sa = symbols_.find(a);
  auto sb = symbols_.find(b);
  if (!sa || !sb) return std::nullopt;
  return computed_relation(*sa, *sb);
}

const KnowledgeBase::PropertyTable* KnowledgeBase::property_table(Sym property) const {
  auto it = properties_.find(property);
  return it == properties_.end() ? nullptr : &it->second;
}

const KnowledgeBase::ClassTable* KnowledgeBase::class_table(Sym class_name) const {
  auto it = classes_.find(class_name);
  return it == classes_.end() ? nullptr : &it->second;
}

const KnowledgeBase::DataTable* KnowledgeBase::data_table(Sym property) const {
  auto it = data_.find(property);
  return it == data_.end() ? nullptr : &it->second;
}

std::optional<CharacteristicsProfile> parse_profile(std::string_view name) {
  if (name == "paper") return CharacteristicsProfile::kPaper;
  if (name == "corrected") return CharacteristicsProfile::kCorrected;
  return std::nullopt;
}

std::string_view to_string(CharacteristicsProfile profile) {
  return profile == CharacteristicsProfile::kPaper ? "paper" : "corrected";
}

void declare_topology_properties(KnowledgeBase& kb, CharacteristicsProfile profile) {
  using C = Characteristic;
  auto name = [](TopoRelation r) { return relation_property(r); };

  std::set<C> disjoint{C::kSymmetric, C::kIrreflexive};
  if (profile == CharacteristicsProfile::kPaper) disjoint.insert(C::kTransitive);

  // covers/coveredBy and meet/equals are not tabulated with the others; they
  // get the characteristics that hold for the relations they name.
  kb.declare_property({name(TopoRelation::kDisjoint), disjoint, std::nullopt});
  kb.declare_property({name(TopoRelation::kContains),
                       {C::kTransitive, C::kAsymmetric, C::kIrreflexive},
                       name(TopoRelation::kInside)});
  kb.declare_property({name(TopoRelation::kInside),
                       {C::kTransitive, C::kAsymmetric, C::kIrreflexive},
                       name(TopoRelation::kContains)});
  kb.declare_property({name(TopoRelation::kOverlaps), {C::kSymmetric, C::kIrreflexive}, std::nullopt});
  kb.declare_property({name(TopoRelation::kCovers),
                       {C::kAsymmetric, C::kIrreflexive},
                       name(TopoRelation::kCoveredBy)});
  kb.declare_property({name(TopoRelation::kCoveredBy),
                       {C::kAsymmetric, C::kIrreflexive},
                       name(TopoRelation::kCovers)});
  kb.declare_property({name(TopoRelation::kMeet), {C::kSymmetric, C::kIrreflexive}, std::nullopt});
  kb.declare_property({name(TopoRelation::kEquals), {C::kSymmetric, C::kTransitive}, std::nullopt});
}

EnrichReport enrich_topology(KnowledgeBase& kb, const RelateOptions& options, int jobs) {
  std::vector<Sym> bodies;
  for (Sym id : kb.individual_syms()) {
    if (kb.individual(id)->geometry) bodies.push_back(id);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(bodies.size() * (bodies.size() > 0 ? bodies.size() - 1 : 0) / 2);
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    for (std::size_t j = i + 1; j < bodies.size(); ++j) pairs.emplace_back(i, j);
  }

  std::vector<std::optional<TopoRelation>> results(pairs.size());
  std::vector<std::string> failures(pairs.size());
  const KnowledgeBase& view = kb;
  detail::parallel_for(pairs.size(), jobs, [&](std::size_t k) {
    const auto& a = *view.individual(bodies[pairs[k].first])->geometry;
    const auto& b = *view.individual(bodies[pairs[k].second])->geometry;
    try {
      results[k] = relate(a, b, options);
    } catch (const Error& e) {
      failures[k] = e.what();
    }
  });

  EnrichReport report;
  report.pairs = pairs.size();
  report.relate_calls = pairs.size();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const Sym a = bodies[pairs[k].first];
    const Sym b = bodies[pairs[k].second];
    if (!results[k]) {
      report.errors.push_back({kb.symbols().name(a), kb.symbols().name(b), failures[k]});
      continue;
    }
    kb.record_relation(a, b, *results[k]);
    ++report.counts[std::string(to_string(*results[k]))];
    ++report.counts[std::string(to_string(inverse(*results[k])))];
  }
  return report;
}

namespace {

std::vector<std::string> collect_lines(const KnowledgeBase& kb, bool with_provenance) {
  const auto& syms = kb.symbols();
  std::vector<std::string> lines;
  lines.reserve(kb.assertion_count());
  auto emit = [&](Sym s, std::string_view p, Sym o, KnowledgeBase::StoredProvenance prov) {
    std::string line = syms.name(s);
    line += '\t';
    line += p;
    line += '\t';
    line += syms.name(o);
    if (with_provenance) {
      line += '\t';
      line += kb.load(prov).to_string();
    }
    lines.push_back(std::move(line));
  };
  for (const auto& [p, table] : kb.property_tables()) {
    for (const auto& [k, info] : table.facts) {
      emit(static_cast<Sym>(k >> 32), syms.name(p), static_cast<Sym>(k & 0xffffffffu),
           info.provenance);
    }
  }
  for (const auto& [c, table] : kb.class_tables()) {
    for (const auto& [ind, info] : table.members) emit(ind, "rdf:type", c, info.provenance);
  }
  for (const auto& [p, table] : kb.data_tables()) {
    for (const auto& [ind, value] : table) {
      std::string line = syms.name(ind) + '\t' + syms.name(p) + '\t';
      line += value.kind == Value::Kind::kString ? '"' + syms.name(value.sym) + '"'
                                                 : syms.name(value.sym);
      if (with_provenance) line += "\tasserted";
      lines.push_back(std::move(line));
    }
  }
  std::sort(lines.begin(), lines.end());
  return lines;
}

}  // namespace

std::string export_triples(const KnowledgeBase& kb) {
  std::string out;
  for (const auto& line : collect_lines(kb, true)) {
    out += line;
    out += '\n';
  }
  return out;
}

std::vector<std::string> fact_set(const KnowledgeBase& kb) { return collect_lines(kb, false); }

}  // namespace csgtopo
