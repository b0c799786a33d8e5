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

#include "csgtopo/engine.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>

#include "csgtopo/error.hpp"
#include "parallel.hpp"

namespace csgtopo {

std::string Derivation::to_line() const {
  return std::to_string(round) + '\t' + source + '\t' + bindings + '\t' + subject + '\t' +
         predicate + '\t' + object;
}

std::string EvaluationReport::log_text() const {
  std::string out;
  for (const auto& d : log) {
    out += d.to_line();
    out += '\n';
  }
  return out;
}

std::string QueryResult::to_tsv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) out += '\t';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += '\t';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

namespace {

using Binding = std::vector<std::optional<Value>>;

struct Window {
  std::uint32_t lo = 0;
  std::uint32_t hi = std::numeric_limits<std::uint32_t>::max();

  bool contains(std::uint32_t stamp) const { return stamp >= lo && stamp < hi; }
};

struct CTerm {
  bool variable = false;
  int slot = -1;
  Value constant;
};

struct CAtom {
  const Atom* source = nullptr;
  Sym name = 0;
  const BuiltinRegistry::Entry* builtin = nullptr;
  // Set for property atoms over topo:<relation>.
  std::optional<TopoRelation> topo;
  std::vector<CTerm> args;
};

struct CompiledBody {
  std::vector<CAtom> atoms;
  // checks[i]: built-ins whose arguments are all bound once atoms[0, i) matched.
  std::vector<std::vector<CAtom>> checks;
  std::vector<std::string> var_names;
};

struct CompiledRule {
  const Rule* rule = nullptr;
  std::size_t index = 0;
  CompiledBody body;
  std::vector<CAtom> head;
};

class Compiler {
 public:
  Compiler(KnowledgeBase& kb, const BuiltinRegistry& registry) : kb_(kb), registry_(registry) {}

  CompiledBody body(const std::vector<Atom>& antecedent) {
    CompiledBody out;
    slots_.clear();
    std::vector<CAtom> builtins;
    for (const auto& a : antecedent) {
      if (a.kind == Atom::Kind::kBuiltin) {
        builtins.push_back(atom(a, out));
      } else {
        out.atoms.push_back(atom(a, out));
      }
    }
    out.checks.resize(out.atoms.size() + 1);
    for (auto& b : builtins) {
      std::size_t needed = 0;
      for (const auto& t : b.args) {
        if (!t.variable) continue;
        for (std::size_t i = 0; i < out.atoms.size(); ++i) {
          const auto& args = out.atoms[i].args;
          if (std::any_of(args.begin(), args.end(), [&](const CTerm& x) {
                return x.variable && x.slot == t.slot;
              })) {
            needed = std::max(needed, i + 1);
            break;
          }
        }
      }
      out.checks[needed].push_back(std::move(b));
    }
    return out;
  }

  std::vector<CAtom> head(const std::vector<Atom>& consequent, CompiledBody& body) {
    std::vector<CAtom> out;
    for (const auto& a : consequent) out.push_back(atom(a, body));
    return out;
  }

  int slot(const std::string& var) const { return slots_.at(var); }

 private:
  CAtom atom(const Atom& a, CompiledBody& body) {
    CAtom c;
    c.source = &a;
    if (a.kind == Atom::Kind::kBuiltin) {
      c.builtin = registry_.find(a.name);
    } else {
      c.name = kb_.intern(a.name);
      if (a.kind == Atom::Kind::kProperty && a.name.starts_with("topo:")) {
        c.topo = parse_relation(std::string_view(a.name).substr(5));
      }
    }
    for (const auto& t : a.args) {
      CTerm ct;
      switch (t.kind) {
        case Term::Kind::kVariable: {
          ct.variable = true;
          auto [it, inserted] = slots_.try_emplace(t.text, static_cast<int>(body.var_names.size()));
          if (inserted) body.var_names.push_back(t.text);
          ct.slot = it->second;
          break;
        }
        case Term::Kind::kIndividual:
          ct.constant = {Value::Kind::kIndividual, kb_.intern(t.text), 0.0};
          break;
        case Term::Kind::kNumber:
          ct.constant = {Value::Kind::kNumber, kb_.intern(t.text), t.number};
          break;
        case Term::Kind::kString:
          ct.constant = {Value::Kind::kString, kb_.intern(t.text), 0.0};
          break;
      }
      c.args.push_back(ct);
    }
    return c;
  }

  KnowledgeBase& kb_;
  const BuiltinRegistry& registry_;
  std::map<std::string, int> slots_;
};

std::string value_text(const KnowledgeBase& kb, const Value& v) { return kb.symbols().name(v.sym); }

std::string describe_value(const KnowledgeBase& kb, const Value& v) {
  switch (v.kind) {
    case Value::Kind::kIndividual: return "individual " + value_text(kb, v);
    case Value::Kind::kNumber: return "number " + value_text(kb, v);
    case Value::Kind::kString: return "string \"" + value_text(kb, v) + "\"";
  }
  return "?";
}

std::string binding_text(const KnowledgeBase& kb, const CompiledBody& body, const Binding& b) {
  std::vector<std::pair<std::string, std::string>> parts;
  for (std::size_t i = 0; i < body.var_names.size(); ++i) {
    if (b[i]) parts.emplace_back(body.var_names[i], value_text(kb, *b[i]));
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& [name, value] : parts) {
    if (!out.empty()) out += ',';
    out += '?' + name + '=' + value;
  }
  return out.empty() ? "-" : out;
}

// Relations needed by topological built-ins: knowledge base first, then a
// per-evaluation memo, then geometry. Pairs are related once in
// lexicographic id order.
class RelationOracle {
 public:
  RelationOracle(KnowledgeBase& kb, const EvaluationOptions& options)
      : kb_(kb), options_(options) {}

  using Context = std::function<std::string()>;

  // nullopt only in collecting mode, for a pair not yet known.
  std::optional<TopoRelation> relation(Sym a, Sym b, const Context& context) {
    if (a == b) {
      geometry(a, context);
      return TopoRelation::kEquals;
    }
    if (auto known = kb_.computed_relation(a, b)) return known;
    const bool ordered = kb_.symbols().name(a) < kb_.symbols().name(b);
    const Sym lo = ordered ? a : b;
    const Sym hi = ordered ? b : a;
    const auto k = KnowledgeBase::key(lo, hi);
    auto it = memo_.find(k);
    if (it == memo_.end()) {
      geometry(lo, context);
      geometry(hi, context);
      if (collecting) {
        if (wanted_keys_.insert(k).second) wanted_.emplace_back(lo, hi);
        return std::nullopt;
      }
      it = memo_.emplace(k, compute(lo, hi)).first;
    }
    if (!it->second.relation) throw EvaluationError(context() + ": " + it->second.error);
    return ordered ? *it->second.relation : inverse(*it->second.relation);
  }

  bool collecting = false;

  bool has_wanted() const { return !wanted_.empty(); }

  void resolve_wanted() {
    std::vector<Outcome> outcomes(wanted_.size());
    detail::parallel_for(wanted_.size(), options_.jobs, [&](std::size_t i) {
      outcomes[i] = compute(wanted_[i].first, wanted_[i].second);
    });
    for (std::size_t i = 0; i < wanted_.size(); ++i) {
      memo_.emplace(KnowledgeBase::key(wanted_[i].first, wanted_[i].second), std::move(outcomes[i]));
    }
    wanted_.clear();
    wanted_keys_.clear();
  }

  // Stores memoized relations as computed facts. Failed pairs stay memoized.
  std::vector<Derivation> flush(std::uint32_t round) {
    struct Entry {
      std::string lo, hi;
      Sym lo_sym, hi_sym;
      TopoRelation relation;
    };
    std::vector<Entry> entries;
    for (auto it = memo_.begin(); it != memo_.end();) {
      if (!it->second.relation) {
        ++it;
        continue;
      }
      const Sym lo = static_cast<Sym>(it->first >> 32);
      const Sym hi = static_cast<Sym>(it->first & 0xffffffffu);
      entries.push_back({kb_.symbols().name(lo), kb_.symbols().name(hi), lo, hi, *it->second.relation});
      it = memo_.erase(it);
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& x, const Entry& y) { return std::tie(x.lo, x.hi) < std::tie(y.lo, y.hi); });
    std::vector<Derivation> log;
    log.reserve(entries.size());
    for (const auto& e : entries) {
      kb_.record_relation(e.lo_sym, e.hi_sym, e.relation);
      log.push_back({round, "computed", "-", e.lo, relation_property(e.relation), e.hi});
    }
    return log;
  }

  std::size_t relate_calls() const { return relate_calls_.load(); }

 private:
  struct Outcome {
    std::optional<TopoRelation> relation;
    std::string error;
  };

  const Solid& geometry(Sym id, const Context& context) const {
    const Individual* ind = kb_.individual(id);
    if (ind == nullptr) {
      throw EvaluationError(context() + ": unknown individual '" + kb_.symbols().name(id) + "'");
    }
    if (!ind->geometry) {
      throw EvaluationError(context() + ": individual '" + ind->id + "' has no geometry");
    }
    return *ind->geometry;
  }

  Outcome compute(Sym lo, Sym hi) {
    ++relate_calls_;
    const auto& a = *kb_.individual(lo)->geometry;
    const auto& b = *kb_.individual(hi)->geometry;
    try {
      return {relate(a, b, options_.relate), {}};
    } catch (const Error& e) {
      return {std::nullopt, "relating '" + kb_.symbols().name(lo) + "' and '" +
                                kb_.symbols().name(hi) + "' failed: " + e.what()};
    }
  }

  KnowledgeBase& kb_;
  const EvaluationOptions& options_;
  std::unordered_map<std::uint64_t, Outcome> memo_;
  std::vector<std::pair<Sym, Sym>> wanted_;
  std::unordered_set<std::uint64_t> wanted_keys_;
  std::atomic<std::size_t> relate_calls_{0};
};

class Matcher {
 public:
  using Emit = std::function<void(const Binding&)>;

  Matcher(const KnowledgeBase& kb, RelationOracle& oracle, const CompiledBody& body,
          std::string label)
      : kb_(kb), oracle_(oracle), body_(body), label_(std::move(label)) {}

  void run(const std::vector<Window>& windows, const Emit& emit) {
    windows_ = &windows;
    emit_ = &emit;
    Binding binding(body_.var_names.size());
    step(0, binding);
  }

 private:
  const Value* resolve(const CTerm& t, const Binding& b) const {
    if (!t.variable) return &t.constant;
    return b[t.slot] ? &*b[t.slot] : nullptr;
  }

  // Binds or compares; `bound` records slots to undo.
  bool unify(const CTerm& t, const Value& v, Binding& b, std::vector<int>& bound) const {
    if (!t.variable) return t.constant == v;
    auto& slot = b[t.slot];
    if (slot) return *slot == v;
    slot = v;
    bound.push_back(t.slot);
    return true;
  }

  static void undo(Binding& b, std::vector<int>& bound, std::size_t mark) {
    while (bound.size() > mark) {
      b[bound.back()].reset();
      bound.pop_back();
    }
  }

  void step(std::size_t i, Binding& b) {
    for (const auto& check : body_.checks[i]) {
      if (!holds(check, b)) return;
    }
    if (i == body_.atoms.size()) {
      (*emit_)(b);
      return;
    }
    const CAtom& atom = body_.atoms[i];
    const Window& window = (*windows_)[i];
    if (atom.source->kind == Atom::Kind::kClass) {
      match_class(i, atom, window, b);
    } else {
      match_property(i, atom, window, b);
    }
  }

  void match_class(std::size_t i, const CAtom& atom, const Window& window, Binding& b) {
    const auto* table = kb_.class_table(atom.name);
    if (table == nullptr) return;
    if (const Value* v = resolve(atom.args[0], b)) {
      if (v->kind != Value::Kind::kIndividual) return;
      auto it = table->members.find(v->sym);
      if (it != table->members.end() && window.contains(it->second.stamp)) step(i + 1, b);
      return;
    }
    const int slot = atom.args[0].slot;
    for (const auto& e : table->order) {
      if (!window.contains(e.stamp)) continue;
      b[slot] = Value{Value::Kind::kIndividual, e.node, 0.0};
      step(i + 1, b);
    }
    b[slot].reset();
  }

  void match_property(std::size_t i, const CAtom& atom, const Window& window, Binding& b) {
    std::vector<int> bound;
    const CTerm& st = atom.args[0];
    const CTerm& ot = atom.args[1];
    if (atom.topo && match_geometric(i, atom, window, b)) return;
    auto visit = [&](Sym s, const Value& o) {
      const std::size_t mark = bound.size();
      if (unify(st, Value{Value::Kind::kIndividual, s, 0.0}, b, bound) && unify(ot, o, b, bound)) {
        step(i + 1, b);
      }
      undo(b, bound, mark);
    };

    if (const auto* table = kb_.property_table(atom.name)) {
      const Value* sv = resolve(st, b);
      const Value* ov = resolve(ot, b);
      if (sv != nullptr) {
        if (sv->kind == Value::Kind::kIndividual) {
          if (auto it = table->out.find(sv->sym); it != table->out.end()) {
            for (const auto& e : it->second) {
              if (window.contains(e.stamp)) visit(sv->sym, Value{Value::Kind::kIndividual, e.node, 0.0});
            }
          }
        }
      } else if (ov != nullptr) {
        if (ov->kind == Value::Kind::kIndividual) {
          if (auto it = table->in.find(ov->sym); it != table->in.end()) {
            for (const auto& e : it->second) {
              if (window.contains(e.stamp)) visit(e.node, *ov);
            }
          }
        }
      } else {
        for (const auto& [s, edges] : table->out) {
          for (const auto& e : edges) {
            if (window.contains(e.stamp)) visit(s, Value{Value::Kind::kIndividual, e.node, 0.0});
          }
        }
      }
    }

    // Data property values are part of the initial state (stamp 0).
    if (!window.contains(0)) return;
    if (const auto* data = kb_.data_table(atom.name)) {
      if (const Value* sv = resolve(st, b)) {
        if (sv->kind != Value::Kind::kIndividual) return;
        if (auto it = data->find(sv->sym); it != data->end()) visit(sv->sym, it->second);
      } else {
        for (const auto& [s, value] : *data) visit(s, value);
      }
    }
  }

  bool has_geometry(Sym id) const {
    const Individual* ind = kb_.individual(id);
    return ind != nullptr && ind->geometry.has_value();
  }

  // A topo:<relation> atom over two bound individuals with geometry holds
  // when the relation holds geometrically (a fact of the initial state) or
  // when it is stored. Returns false when the atom is not of that shape.
  bool match_geometric(std::size_t i, const CAtom& atom, const Window& window, Binding& b) {
    const Value* sv = resolve(atom.args[0], b);
    const Value* ov = resolve(atom.args[1], b);
    if (sv == nullptr || ov == nullptr || sv->kind != Value::Kind::kIndividual ||
        ov->kind != Value::Kind::kIndividual || !has_geometry(sv->sym) || !has_geometry(ov->sym)) {
      return false;
    }
    std::optional<std::uint32_t> stored;
    if (const auto* table = kb_.property_table(atom.name)) {
      auto it = table->facts.find(KnowledgeBase::key(sv->sym, ov->sym));
      if (it != table->facts.end()) stored = it->second.stamp;
    }
    if (!window.contains(0) && !(stored && window.contains(*stored))) return true;
    auto context = [&] {
      return label_ + ": " + atom.source->to_string() + " with " + binding_text(kb_, body_, b);
    };
    const auto relation = oracle_.relation(sv->sym, ov->sym, context);
    const auto stamp = relation == atom.topo ? std::optional<std::uint32_t>(0) : stored;
    if (stamp && window.contains(*stamp)) step(i + 1, b);
    return true;
  }

  bool holds(const CAtom& check, const Binding& b) {
    const auto& entry = *check.builtin;
    const Value* x = resolve(check.args[0], b);
    const Value* y = resolve(check.args[1], b);
    auto context = [&] {
      return label_ + ": " + check.source->to_string() + " with " + binding_text(kb_, body_, b);
    };
    switch (entry.kind) {
      case BuiltinRegistry::Kind::kTopological: {
        if (x->kind != Value::Kind::kIndividual || y->kind != Value::Kind::kIndividual) {
          throw EvaluationError(context() + ": type error, expected individuals but got " +
                                describe_value(kb_, *x) + " and " + describe_value(kb_, *y));
        }
        const auto relation = oracle_.relation(x->sym, y->sym, context);
        return relation && *relation == *entry.relation;
      }
      case BuiltinRegistry::Kind::kComparison:
        if (x->kind != Value::Kind::kNumber || y->kind != Value::Kind::kNumber) {
          throw EvaluationError(context() + ": type error, expected numbers but got " +
                                describe_value(kb_, *x) + " and " + describe_value(kb_, *y));
        }
        return entry.compare(x->number, y->number);
      case BuiltinRegistry::Kind::kSelect:
        break;
    }
    throw EvaluationError(context() + ": built-in cannot be evaluated in an antecedent");
  }

  const KnowledgeBase& kb_;
  RelationOracle& oracle_;
  const CompiledBody& body_;
  std::string label_;
  const std::vector<Window>* windows_ = nullptr;
  const Emit* emit_ = nullptr;
};

void run_with_prefetch(Matcher& matcher, RelationOracle& oracle, const std::vector<Window>& windows,
                       int jobs, const Matcher::Emit& emit) {
  if (jobs > 1) {
    const Matcher::Emit ignore = [](const Binding&) {};
    for (;;) {
      oracle.collecting = true;
      matcher.run(windows, ignore);
      oracle.collecting = false;
      if (!oracle.has_wanted()) break;
      oracle.resolve_wanted();
    }
  }
  matcher.run(windows, emit);
}

struct HeadFact {
  bool is_class;
  Sym subject;
  Sym predicate;  // property, or class name for memberships
  Sym object;
};

struct Firing {
  std::size_t rule_index;
  std::string bindings;
  std::vector<HeadFact> facts;
};

std::optional<KnowledgeBase::StoredProvenance> stored_provenance(const KnowledgeBase& kb,
                                                                  const HeadFact& h) {
  if (h.is_class) {
    const auto* table = kb.class_table(h.predicate);
    if (table == nullptr) return std::nullopt;
    auto it = table->members.find(h.subject);
    if (it == table->members.end()) return std::nullopt;
    return it->second.provenance;
  }
  const auto* table = kb.property_table(h.predicate);
  if (table == nullptr) return std::nullopt;
  auto it = table->facts.find(KnowledgeBase::key(h.subject, h.object));
  if (it == table->facts.end()) return std::nullopt;
  return it->second.provenance;
}

std::vector<HeadFact> instantiate(const KnowledgeBase& kb, const CompiledRule& rule, const Binding& b) {
  std::vector<HeadFact> out;
  auto individual_of = [&](const CTerm& t) -> Sym {
    const Value& v = t.variable ? *b[t.slot] : t.constant;
    if (v.kind != Value::Kind::kIndividual) {
      throw EvaluationError(rule.rule->id + ": consequent needs an individual but got " +
                            describe_value(kb, v) + " (data assertions are not derived)");
    }
    if (kb.individual(v.sym) == nullptr) {
      throw EvaluationError(rule.rule->id + ": consequent names unknown individual '" +
                            kb.symbols().name(v.sym) + "'");
    }
    return v.sym;
  };
  for (const auto& h : rule.head) {
    if (h.source->kind == Atom::Kind::kClass) {
      out.push_back({true, individual_of(h.args[0]), h.name, 0});
    } else {
      out.push_back({false, individual_of(h.args[0]), h.name, individual_of(h.args[1])});
    }
  }
  return out;
}

// Canonical spelling of an atom with variables renamed by `rename`; argument
// order is dropped for symmetric atoms.
std::string canonical(const KnowledgeBase& kb, const BuiltinRegistry& registry, const Atom& a,
                      const std::function<std::string(const Term&)>& rename) {
  std::vector<std::string> args;
  for (const auto& t : a.args) args.push_back(rename(t));
  bool symmetric = false;
  if (a.kind == Atom::Kind::kBuiltin) {
    const auto* entry = registry.find(a.name);
    symmetric = entry != nullptr && entry->symmetric;
  } else if (a.kind == Atom::Kind::kProperty) {
    const auto* decl = kb.find_property(a.name);
    symmetric = decl != nullptr && decl->has(Characteristic::kSymmetric);
  }
  if (symmetric) std::sort(args.begin(), args.end());
  std::string out = std::to_string(static_cast<int>(a.kind)) + a.name + "(";
  for (const auto& s : args) out += s + ",";
  return out + ")";
}

bool symmetric_in(const KnowledgeBase& kb, const BuiltinRegistry& registry,
                  const std::vector<Atom>& body, const std::string& x,
                  const std::string& y) {
  auto identity = [](const Term& t) { return t.to_string(); };
  auto swap = [&](const Term& t) {
    if (t.is_variable() && t.text == x) return "?" + y;
    if (t.is_variable() && t.text == y) return "?" + x;
    return t.to_string();
  };
  std::vector<std::string> original, swapped;
  for (const auto& a : body) {
    original.push_back(canonical(kb, registry, a, identity));
    swapped.push_back(canonical(kb, registry, a, swap));
  }
  std::sort(original.begin(), original.end());
  std::sort(swapped.begin(), swapped.end());
  return original == swapped;
}

}  // namespace

EvaluationReport evaluate(const std::vector<Rule>& rules, KnowledgeBase& kb,
                          const EvaluationOptions& options) {
  Compiler compiler(kb, *options.registry);
  std::vector<CompiledRule> compiled;
  compiled.reserve(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    CompiledRule c;
    c.rule = &rules[i];
    c.index = i;
    c.body = compiler.body(rules[i].antecedent);
    c.head = compiler.head(rules[i].consequent, c.body);
    compiled.push_back(std::move(c));
  }

  RelationOracle oracle(kb, options);
  EvaluationReport report;
  auto fact_count = [&kb] { return kb.assertion_count() + kb.membership_count(); };

  const std::size_t initial = fact_count();
  const std::uint32_t base = kb.stamp() + 1;
  kb.set_stamp(base);
  saturate(kb);

  std::uint32_t lo = 0;
  std::uint32_t hi = base + 1;
  for (std::uint32_t round = 1;; ++round) {
    std::vector<Firing> firings;
    for (const auto& rule : compiled) {
      Matcher matcher(kb, oracle, rule.body, rule.rule->id);
      const std::size_t k = rule.body.atoms.size();
      const Matcher::Emit emit = [&](const Binding& b) {
        firings.push_back({rule.index, binding_text(kb, rule.body, b), instantiate(kb, rule, b)});
      };
      if (k == 0) {
        if (round == 1) run_with_prefetch(matcher, oracle, {}, options.jobs, emit);
        continue;
      }
      for (std::size_t delta = 0; delta < k; ++delta) {
        if (lo == 0 && delta > 0) break;  // nothing is old in the first round
        std::vector<Window> windows(k);
        for (std::size_t j = 0; j < k; ++j) {
          if (j < delta) {
            windows[j] = {0, lo};
          } else if (j == delta) {
            windows[j] = {lo, hi};
          } else {
            windows[j] = {0, hi};
          }
        }
        run_with_prefetch(matcher, oracle, windows, options.jobs, emit);
      }
    }

    std::sort(firings.begin(), firings.end(), [](const Firing& a, const Firing& b) {
      return std::tie(a.rule_index, a.bindings) < std::tie(b.rule_index, b.bindings);
    });

    const std::uint32_t stamp = hi;
    kb.set_stamp(stamp);
    const std::size_t before = fact_count();
    for (const auto& f : firings) {
      const std::string& id = rules[f.rule_index].id;
      const auto prov = kb.store(Provenance::inferred(id));
      for (const auto& h : f.facts) {
        // Logged when the fact is new or this firing improves its provenance,
        // which is what a replay needs to reach the same state.
        const auto before = stored_provenance(kb, h);
        if (h.is_class) {
          kb.add_member(h.predicate, h.subject, prov);
        } else {
          kb.add_fact(h.subject, h.predicate, h.object, prov);
        }
        if (before && !kb.precedes(prov, *before)) continue;
        report.log.push_back({round, id, f.bindings, kb.symbols().name(h.subject),
                              h.is_class ? "rdf:type" : kb.symbols().name(h.predicate),
                              kb.symbols().name(h.is_class ? h.predicate : h.object)});
      }
    }
    for (auto& d : oracle.flush(round)) report.log.push_back(std::move(d));
    saturate_from(kb, stamp);
    report.rounds = round;
    if (fact_count() == before) break;
    lo = stamp;
    hi = stamp + 1;
  }
  kb.mark_saturated();
  report.new_facts = fact_count() - initial;
  report.relate_calls = oracle.relate_calls();
  return report;
}

QueryResult query(const Query& q, KnowledgeBase& kb, const EvaluationOptions& options) {
  Compiler compiler(kb, *options.registry);
  const CompiledBody body = compiler.body(q.antecedent);
  std::vector<int> columns;
  QueryResult result;
  for (const auto& var : q.select) {
    columns.push_back(compiler.slot(var));
    result.columns.push_back("?" + var);
  }

  RelationOracle oracle(kb, options);
  Matcher matcher(kb, oracle, body, "query");
  const std::vector<Window> windows(body.atoms.size());
  run_with_prefetch(matcher, oracle, windows, options.jobs, [&](const Binding& b) {
    std::vector<std::string> row;
    row.reserve(columns.size());
    for (int slot : columns) row.push_back(value_text(kb, *b[slot]));
    result.rows.push_back(std::move(row));
  });

  std::sort(result.rows.begin(), result.rows.end());
  if (q.distinct) {
    result.rows.erase(std::unique(result.rows.begin(), result.rows.end()), result.rows.end());
    if (q.select.size() == 2 && q.select[0] != q.select[1] &&
        symmetric_in(kb, *options.registry, q.antecedent, q.select[0], q.select[1])) {
      std::erase_if(result.rows, [](const auto& row) { return row[1] < row[0]; });
    }
  }
  oracle.flush(0);
  result.relate_calls = oracle.relate_calls();
  return result;
}

void replay_log(KnowledgeBase& kb, std::string_view log_text) {
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start < log_text.size()) {
    const std::size_t end = std::min(log_text.find('\n', start), log_text.size());
    const std::string_view line = log_text.substr(start, end - start);
    start = end + 1;
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t from = 0;
    while (true) {
      const std::size_t tab = line.find('\t', from);
      fields.push_back(line.substr(from, tab == std::string_view::npos ? line.npos : tab - from));
      if (tab == std::string_view::npos) break;
      from = tab + 1;
    }
    if (fields.size() != 6) {
      throw Error("derivation log line " + std::to_string(line_number) + ": expected 6 fields");
    }
    const auto source = fields[1];
    const auto subject = fields[3];
    const auto predicate = fields[4];
    const auto object = fields[5];
    if (source == "computed") {
      const auto relation =
          predicate.starts_with("topo:") ? parse_relation(predicate.substr(5)) : std::nullopt;
      if (!relation) {
        throw Error("derivation log line " + std::to_string(line_number) +
                    ": unknown relation '" + std::string(predicate) + "'");
      }
      kb.record_relation(subject, object, *relation);
    } else if (predicate == "rdf:type") {
      kb.assert_class(subject, object, Provenance::inferred(std::string(source)));
    } else {
      kb.assert_property(subject, predicate, object, Provenance::inferred(std::string(source)));
    }
  }
  saturate(kb);
}

}  // namespace csgtopo
