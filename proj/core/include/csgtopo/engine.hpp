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
#include <string>
#include <string_view>
#include <vector>

#include "csgtopo/knowledge_base.hpp"
#include "csgtopo/rules.hpp"
#include "csgtopo/topology.hpp"

namespace csgtopo {

struct EvaluationOptions {
  RelateOptions relate;
  /// Worker threads for geometric built-in evaluation.
  int jobs = 1;
  const BuiltinRegistry* registry = &BuiltinRegistry::standard();
};

/// One derived or computed fact.
///
/// Rule firings have source = rule id and the firing's bindings. Relations
/// materialized by topological built-ins have source "computed" and
/// bindings "-"; they stand for both the relation and its inverse.
struct Derivation {
  std::uint32_t round = 0;
  std::string source;
  std::string bindings;
  std::string subject;
  std::string predicate;
  std::string object;

  /// "round\tsource\tbindings\tsubject\tpredicate\tobject"
  std::string to_line() const;
};

struct EvaluationReport {
  std::vector<Derivation> log;
  std::size_t rounds = 0;
  std::size_t relate_calls = 0;
  /// Facts that were new when committed, saturation included.
  std::size_t new_facts = 0;

  std::string log_text() const;
};

/// Semi-naive forward chaining to fixpoint, saturating after every round.
/// Topological built-ins look up computed relations in the knowledge base
/// first and otherwise relate the two geometries once, storing the result as
/// computed facts. Consequent atoms are asserted with provenance
/// inferred(<rule id>).
EvaluationReport evaluate(const std::vector<Rule>& rules, KnowledgeBase& kb,
                          const EvaluationOptions& options);

struct QueryResult {
  std::vector<std::string> columns;  // "?x", ...
  std::vector<std::vector<std::string>> rows;
  std::size_t relate_calls = 0;

  /// Header line plus rows, tab separated, newline terminated.
  std::string to_tsv() const;
};

/// Evaluates the antecedent against the knowledge base without asserting a
/// consequent. Relations computed on the way are still stored in the
/// knowledge base. Rows are sorted; selectDistinct removes duplicates and,
/// when the antecedent is symmetric in its two selected variables, keeps one
/// row per unordered pair (smaller id first).
QueryResult query(const Query& q, KnowledgeBase& kb, const EvaluationOptions& options);

/// Applies a derivation log to `kb` and saturates. Applied to the knowledge
/// base an evaluation started from, it reproduces the evaluated state.
void replay_log(KnowledgeBase& kb, std::string_view log_text);

}  // namespace csgtopo
