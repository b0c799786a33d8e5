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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "csgtopo/error.hpp"
#include "csgtopo/rules.hpp"

namespace csgtopo {

std::string Term::to_string() const {
  switch (kind) {
    case Kind::kVariable: return "?" + text;
    case Kind::kIndividual: return text;
    case Kind::kNumber: return text;
    case Kind::kString: return "\"" + text + "\"";
  }
  return "?";
}

std::string Atom::to_string() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    out += args[i].to_string();
  }
  return out + ")";
}

std::string Rule::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < antecedent.size(); ++i) {
    if (i > 0) out += " ^ ";
    out += antecedent[i].to_string();
  }
  out += " -> ";
  for (std::size_t i = 0; i < consequent.size(); ++i) {
    if (i > 0) out += " ^ ";
    out += consequent[i].to_string();
  }
  return out;
}

const BuiltinRegistry& BuiltinRegistry::standard() {
  static const BuiltinRegistry registry = [] {
    BuiltinRegistry r;
    for (TopoRelation rel : kAllRelations) {
      r.add({"swrl_topo:" + std::string(to_string(rel)), Kind::kTopological, 2, rel, {},
             inverse(rel) == rel});
    }
    r.add({"swrlb:greaterThan", Kind::kComparison, 2, std::nullopt,
           [](double a, double b) { return a > b; }, false});
    r.add({"swrlb:lessThan", Kind::kComparison, 2, std::nullopt,
           [](double a, double b) { return a < b; }, false});
    r.add({"swrlb:equal", Kind::kComparison, 2, std::nullopt,
           [](double a, double b) { return a == b; }, true});
    r.add({"sqwrl:select", Kind::kSelect, -1, std::nullopt, {}, false});
    r.add({"sqwrl:selectDistinct", Kind::kSelect, -1, std::nullopt, {}, false});
    return r;
  }();
  return registry;
}

void BuiltinRegistry::add(Entry entry) {
  std::string name = entry.name;
  entries_.insert_or_assign(std::move(name), std::move(entry));
}

const BuiltinRegistry::Entry* BuiltinRegistry::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

bool BuiltinRegistry::reserved_prefix(std::string_view name) {
  const auto colon = name.find(':');
  if (colon == std::string_view::npos) return false;
  const auto prefix = name.substr(0, colon);
  return prefix == "swrl_topo" || prefix == "swrlb" || prefix == "sqwrl";
}

namespace {

enum class Tok { kName, kVariable, kNumber, kString, kLParen, kRParen, kComma, kAnd, kArrow, kEnd };

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  std::size_t column = 0;
};

constexpr std::string_view kWedge = "\xE2\x88\xA7";  // U+2227
constexpr std::string_view kRightArrow = "\xE2\x86\x92";  // U+2192

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

class Lexer {
 public:
  Lexer(std::string_view line, std::size_t line_number) : src_(line), line_(line_number) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      const std::size_t col = column();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::kEnd, "", 0.0, col});
        return out;
      }
      const char c = src_[pos_];
      if (starts_with(kWedge) || c == '^') {
        pos_ += c == '^' ? 1 : kWedge.size();
        out.push_back({Tok::kAnd, "^", 0.0, col});
      } else if (starts_with(kRightArrow) || starts_with("->")) {
        pos_ += c == '-' ? 2 : kRightArrow.size();
        out.push_back({Tok::kArrow, "->", 0.0, col});
      } else if (c == '(') {
        ++pos_;
        out.push_back({Tok::kLParen, "(", 0.0, col});
      } else if (c == ')') {
        ++pos_;
        out.push_back({Tok::kRParen, ")", 0.0, col});
      } else if (c == ',') {
        ++pos_;
        out.push_back({Tok::kComma, ",", 0.0, col});
      } else if (c == '?') {
        ++pos_;
        std::string name = read_name_part();
        if (name.empty()) fail("expected variable name after '?'", col);
        out.push_back({Tok::kVariable, std::move(name), 0.0, col});
      } else if (c == '"') {
        out.push_back({Tok::kString, read_string(col), 0.0, col});
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 ((c == '-' || c == '+' || c == '.') && pos_ + 1 < src_.size() &&
                  (std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) || src_[pos_ + 1] == '.'))) {
        out.push_back(read_number(col));
      } else if (name_start(c)) {
        std::string name = read_name_part();
        if (pos_ + 1 < src_.size() && src_[pos_] == ':' && name_start(src_[pos_ + 1])) {
          ++pos_;
          name += ':';
          name += read_name_part();
        }
        out.push_back({Tok::kName, std::move(name), 0.0, col});
      } else {
        fail(std::string("unexpected character '") + c + "'", col);
      }
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t col) const {
    throw ParseError(msg, line_, col);
  }

  bool starts_with(std::string_view s) const { return src_.substr(pos_).starts_with(s); }

  // 1-based column in code points.
  std::size_t column() const {
    std::size_t col = 1;
    for (std::size_t i = 0; i < pos_ && i < src_.size(); ++i) {
      if ((static_cast<unsigned char>(src_[i]) & 0xC0) != 0x80) ++col;
    }
    return col;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  std::string read_name_part() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && name_char(src_[pos_])) {
      if (src_[pos_] == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') break;
      ++pos_;
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string read_string(std::size_t col) {
    ++pos_;
    std::string out;
    while (pos_ < src_.size() && src_[pos_] != '"') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
      out += src_[pos_++];
    }
    if (pos_ >= src_.size()) fail("unterminated string literal", col);
    ++pos_;
    return out;
  }

  Token read_number(std::size_t col) {
    const std::size_t start = pos_;
    if (src_[pos_] == '-' || src_[pos_] == '+') ++pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    std::string text(src_.substr(start, pos_ - start));
    const char* first = text.data() + (text[0] == '+' ? 1 : 0);
    double value = 0.0;
    auto [end, ec] = std::from_chars(first, text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size()) {
      fail("malformed number '" + text + "'", col);
    }
    return {Tok::kNumber, std::move(text), value, col};
  }

  std::string_view src_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::size_t line, const BuiltinRegistry& registry)
      : tokens_(std::move(tokens)), line_(line), registry_(registry) {}

  std::pair<std::vector<Atom>, std::vector<Atom>> statement() {
    auto antecedent = conjunction();
    expect(Tok::kArrow, "expected '->' after antecedent");
    auto consequent = conjunction();
    expect(Tok::kEnd, "unexpected trailing input");
    return {std::move(antecedent), std::move(consequent)};
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg, line_, at.column);
  }

  const Token& expect(Tok kind, const std::string& msg) {
    if (peek().kind != kind) fail(msg, peek());
    return advance();
  }

  std::vector<Atom> conjunction() {
    std::vector<Atom> atoms;
    atoms.push_back(atom());
    while (peek().kind == Tok::kAnd) {
      advance();
      atoms.push_back(atom());
    }
    return atoms;
  }

  Atom atom() {
    const Token& head = expect(Tok::kName, "expected atom name");
    Atom a;
    a.name = head.text;
    a.line = line_;
    a.column = head.column;
    expect(Tok::kLParen, "expected '(' after '" + head.text + "'");
    a.args.push_back(term());
    while (peek().kind == Tok::kComma) {
      advance();
      a.args.push_back(term());
    }
    expect(Tok::kRParen, "expected ',' or ')' in argument list of '" + head.text + "'");
    classify(a, head);
    return a;
  }

  Term term() {
    const Token& t = advance();
    switch (t.kind) {
      case Tok::kVariable: return {Term::Kind::kVariable, t.text, 0.0};
      case Tok::kName: return {Term::Kind::kIndividual, t.text, 0.0};
      case Tok::kNumber: return {Term::Kind::kNumber, t.text, t.number};
      case Tok::kString: return {Term::Kind::kString, t.text, 0.0};
      default: fail("expected a variable, individual, number or string", t);
    }
  }

  void classify(Atom& a, const Token& head) {
    if (BuiltinRegistry::reserved_prefix(a.name)) {
      const auto* entry = registry_.find(a.name);
      if (entry == nullptr) fail("unknown built-in '" + a.name + "'", head);
      if (entry->arity >= 0 && static_cast<int>(a.args.size()) != entry->arity) {
        fail("built-in '" + a.name + "' takes " + std::to_string(entry->arity) + " arguments",
             head);
      }
      a.kind = Atom::Kind::kBuiltin;
      return;
    }
    if (a.args.size() == 1) {
      const auto k = a.args[0].kind;
      if (k != Term::Kind::kVariable && k != Term::Kind::kIndividual) {
        fail("class atom '" + a.name + "' needs a variable or individual argument", head);
      }
      a.kind = Atom::Kind::kClass;
      return;
    }
    if (a.args.size() == 2) {
      if (a.name.find(':') == std::string::npos && parse_relation(a.name)) {
        a.name = "topo:" + a.name;
      }
      if (a.args[0].kind != Term::Kind::kVariable && a.args[0].kind != Term::Kind::kIndividual) {
        fail("property atom '" + a.name + "' needs a variable or individual subject", head);
      }
      a.kind = Atom::Kind::kProperty;
      return;
    }
    fail("atom '" + a.name + "' must have one (class) or two (property) arguments", head);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
  const BuiltinRegistry& registry_;
};

struct Statement {
  std::vector<Atom> antecedent;
  std::vector<Atom> consequent;
  std::size_t line;
};

std::string strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

std::vector<Statement> parse_statements(std::string_view text, const BuiltinRegistry& registry) {
  std::vector<Statement> out;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    ++line_number;
    const std::string line = strip_comment(text.substr(start, end - start));
    start = end + 1;
    if (std::all_of(line.begin(), line.end(),
                    [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
      if (end == text.size()) break;
      continue;
    }
    Parser parser(Lexer(line, line_number).run(), line_number, registry);
    auto [antecedent, consequent] = parser.statement();
    out.push_back({std::move(antecedent), std::move(consequent), line_number});
    if (end == text.size()) break;
  }
  return out;
}

// Variables bound by class and property atoms of the antecedent.
std::set<std::string> bound_variables(const std::vector<Atom>& antecedent) {
  std::set<std::string> vars;
  for (const auto& a : antecedent) {
    if (a.kind == Atom::Kind::kBuiltin) continue;
    for (const auto& t : a.args) {
      if (t.is_variable()) vars.insert(t.text);
    }
  }
  return vars;
}

void check_builtin_bindings(const std::vector<Atom>& antecedent, const std::set<std::string>& bound,
                            const BuiltinRegistry& registry) {
  for (const auto& a : antecedent) {
    if (a.kind != Atom::Kind::kBuiltin) continue;
    if (const auto* entry = registry.find(a.name);
        entry != nullptr && entry->kind == BuiltinRegistry::Kind::kSelect) {
      throw ParseError("'" + a.name + "' may only appear as a query consequent", a.line, a.column);
    }
    for (const auto& t : a.args) {
      if (t.is_variable() && bound.count(t.text) == 0) {
        throw ParseError("built-in '" + a.name + "' argument ?" + t.text +
                             " is not bound by a class or property atom",
                         a.line, a.column);
      }
    }
  }
}

}  // namespace

std::vector<Rule> parse_rules(std::string_view text, const BuiltinRegistry& registry) {
  std::vector<Rule> rules;
  for (auto& st : parse_statements(text, registry)) {
    const auto bound = bound_variables(st.antecedent);
    check_builtin_bindings(st.antecedent, bound, registry);
    for (const auto& a : st.consequent) {
      if (a.kind == Atom::Kind::kBuiltin) {
        throw ParseError("built-in '" + a.name + "' is not allowed in a rule consequent", a.line,
                         a.column);
      }
      for (const auto& t : a.args) {
        if (t.is_variable() && bound.count(t.text) == 0) {
          throw ParseError("unsafe rule: consequent variable ?" + t.text +
                               " is not bound by the antecedent",
                           a.line, a.column);
        }
      }
    }
    Rule rule;
    rule.id = "rule-" + std::to_string(rules.size() + 1);
    rule.antecedent = std::move(st.antecedent);
    rule.consequent = std::move(st.consequent);
    rule.line = st.line;
    rules.push_back(std::move(rule));
  }
  return rules;
}

Query parse_query(std::string_view text, const BuiltinRegistry& registry) {
  auto statements = parse_statements(text, registry);
  if (statements.empty()) throw ParseError("no query found", 1, 1);
  if (statements.size() > 1) {
    throw ParseError("expected a single query", statements[1].line, 1);
  }
  auto& st = statements.front();
  const auto bound = bound_variables(st.antecedent);
  check_builtin_bindings(st.antecedent, bound, registry);

  const Atom& head = st.consequent.front();
  const auto* entry = head.kind == Atom::Kind::kBuiltin ? registry.find(head.name) : nullptr;
  if (st.consequent.size() != 1 || entry == nullptr ||
      entry->kind != BuiltinRegistry::Kind::kSelect) {
    throw ParseError("query consequent must be a single sqwrl:select or sqwrl:selectDistinct",
                     head.line, head.column);
  }
  Query q;
  q.distinct = head.name == "sqwrl:selectDistinct";
  q.line = st.line;
  for (const auto& t : head.args) {
    if (!t.is_variable()) {
      throw ParseError("select arguments must be variables", head.line, head.column);
    }
    if (bound.count(t.text) == 0) {
      throw QueryError("line " + std::to_string(st.line) + ": selected variable ?" + t.text +
                       " is not bound by the antecedent");
    }
    q.select.push_back(t.text);
  }
  q.antecedent = std::move(st.antecedent);
  return q;
}

}  // namespace csgtopo
