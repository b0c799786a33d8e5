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

// Property-characteristic closure and consistency checks.

#include <algorithm>
#include <deque>
#include <tuple>

#include "csgtopo/knowledge_base.hpp"

namespace csgtopo {

namespace {

struct Rules {
  Sym property = 0;
  bool symmetric = false;
  bool transitive = false;
  bool reflexive = false;
  std::optional<Sym> inverse;
};

struct Fact {
  Sym s;
  Sym p;
  Sym o;
};

class Saturator {
 public:
  explicit Saturator(KnowledgeBase& kb) : kb_(kb) {
    for (const auto& decl : kb.declarations()) {
      Rules r;
      r.property = kb.intern(decl.name);
      r.symmetric = decl.has(Characteristic::kSymmetric);
      r.transitive = decl.has(Characteristic::kTransitive);
      r.reflexive = decl.has(Characteristic::kReflexive);
      if (decl.inverse_of) r.inverse = kb.intern(*decl.inverse_of);
      if (r.symmetric || r.transitive || r.reflexive || r.inverse) rules_.emplace(r.property, r);
    }
    src_symmetric_ = source("symmetric");
    src_transitive_ = source("transitive");
    src_inverse_ = source("inverse");
    src_reflexive_ = source("reflexive");
  }

  void seed(std::uint32_t from_stamp) {
    for (const auto& [p, rule] : rules_) {
      const auto* table = kb_.property_table(p);
      if (table == nullptr) continue;
      for (const auto& [k, info] : table->facts) {
        if (info.stamp >= from_stamp) {
          work_.push_back({static_cast<Sym>(k >> 32), p, static_cast<Sym>(k & 0xffffffffu)});
        }
      }
    }
    // Deterministic processing order regardless of hash layout.
    std::sort(work_.begin(), work_.end(), [](const Fact& a, const Fact& b) {
      return std::tie(a.p, a.s, a.o) < std::tie(b.p, b.s, b.o);
    });
  }

  void seed_reflexive() {
    const auto individuals = kb_.individual_syms();
    for (const auto& [p, rule] : rules_) {
      if (!rule.reflexive) continue;
      for (Sym a : individuals) derive(a, p, a, src_reflexive_);
    }
  }

  void run() {
    while (!work_.empty()) {
      const Fact f = work_.front();
      work_.pop_front();
      const Rules& rule = rules_.at(f.p);
      if (rule.symmetric) derive(f.o, f.p, f.s, src_symmetric_);
      if (rule.inverse) derive(f.o, *rule.inverse, f.s, src_inverse_);
      if (rule.transitive) {
        const auto* table = kb_.property_table(f.p);
        if (auto it = table->out.find(f.o); it != table->out.end()) {
          const auto successors = it->second;
          for (const auto& e : successors) derive(f.s, f.p, e.node, src_transitive_);
        }
        table = kb_.property_table(f.p);
        if (auto it = table->in.find(f.s); it != table->in.end()) {
          const auto predecessors = it->second;
          for (const auto& e : predecessors) derive(e.node, f.p, f.o, src_transitive_);
        }
      }
    }
  }

 private:
  KnowledgeBase::StoredProvenance source(std::string_view name) {
    return {Provenance::Kind::kInferred, kb_.intern(name)};
  }

  void derive(Sym s, Sym p, Sym o, KnowledgeBase::StoredProvenance prov) {
    if (kb_.add_fact(s, p, o, prov) && rules_.count(p) != 0) work_.push_back({s, p, o});
  }

  KnowledgeBase& kb_;
  std::unordered_map<Sym, Rules> rules_;
  std::deque<Fact> work_;
  KnowledgeBase::StoredProvenance src_symmetric_, src_transitive_, src_inverse_, src_reflexive_;
};

}  // namespace

void saturate(KnowledgeBase& kb) {
  Saturator saturator(kb);
  saturator.seed(0);
  saturator.seed_reflexive();
  saturator.run();
  kb.mark_saturated();
}

void saturate_from(KnowledgeBase& kb, std::uint32_t from_stamp) {
  Saturator saturator(kb);
  saturator.seed(from_stamp);
  saturator.run();
}

std::string Violation::to_string() const {
  switch (kind) {
    case Kind::kIrreflexive:
      return "irreflexive " + property + ": " + subject + " relates to itself";
    case Kind::kAsymmetric:
      return "asymmetric " + property + ": " + subject + " <-> " + object;
    case Kind::kFunctional:
      return "functional " + property + ": " + subject + " -> {" + object + ", " + other + "}";
  }
  return "?";
}

std::vector<Violation> check_consistency(const KnowledgeBase& kb) {
  const auto& syms = kb.symbols();
  std::vector<Violation> out;
  for (const auto& decl : kb.declarations()) {
    const auto p = syms.find(decl.name);
    if (!p) continue;
    const auto* table = kb.property_table(*p);
    if (table == nullptr) continue;
    const bool irreflexive = decl.has(Characteristic::kIrreflexive);
    const bool asymmetric = decl.has(Characteristic::kAsymmetric);
    for (const auto& [k, info] : table->facts) {
      const Sym s = static_cast<Sym>(k >> 32);
      const Sym o = static_cast<Sym>(k & 0xffffffffu);
      if (s == o) {
        if (irreflexive) out.push_back({Violation::Kind::kIrreflexive, decl.name, syms.name(s), syms.name(o), {}});
        continue;
      }
      if (asymmetric && syms.name(s) < syms.name(o) &&
          table->facts.count(KnowledgeBase::key(o, s)) != 0) {
        out.push_back({Violation::Kind::kAsymmetric, decl.name, syms.name(s), syms.name(o), {}});
      }
    }
    if (decl.has(Characteristic::kFunctional)) {
      for (const auto& [s, edges] : table->out) {
        std::vector<std::string> objects;
        for (const auto& e : edges) objects.push_back(syms.name(e.node));
        std::sort(objects.begin(), objects.end());
        for (std::size_t i = 0; i < objects.size(); ++i) {
          for (std::size_t j = i + 1; j < objects.size(); ++j) {
            out.push_back({Violation::Kind::kFunctional, decl.name, syms.name(s), objects[i], objects[j]});
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.property, a.kind, a.subject, a.object, a.other) <
           std::tie(b.property, b.kind, b.subject, b.object, b.other);
  });
  return out;
}

}  // namespace csgtopo
