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
#include <stdexcept>
#include <string>

namespace csgtopo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point or operand lies outside the valid domain (outside the universe,
/// or touching its boundary).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An argument violates a documented precondition (non-positive radius,
/// non-unit normal, epsilon out of range, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// An operand of a relation test has an empty regularized interior.
class DegenerateOperandError : public Error {
 public:
  using Error::Error;
};

/// A 4-intersection mask that matches no relation.
class UnclassifiableMaskError : public Error {
 public:
  using Error::Error;
};

/// Contradictory or conflicting property characteristic declaration.
class DeclarationError : public Error {
 public:
  using Error::Error;
};

/// Unknown individual, duplicate id, dangling assertion.
class KnowledgeBaseError : public Error {
 public:
  using Error::Error;
};

/// Malformed scene document.
class SceneError : public Error {
 public:
  using Error::Error;
};

/// Rule or query text that does not parse, or fails safety checks.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Query-specific failure (e.g. selecting a variable that is never bound).
class QueryError : public Error {
 public:
  using Error::Error;
};

/// Failure while evaluating a rule against data: a topological built-in over
/// an individual without geometry, a comparison over non-numeric values.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace csgtopo
