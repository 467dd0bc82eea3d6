#pragma once

#include "csplin/ast.hpp"
#include "csplin/printer.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csplin {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(int line_, int col_, const std::string& msg)
      : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

namespace detail {

struct SExpr {
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 1;
  int col = 1;
};

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_ws();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_ws();
    }
    return out;
  }

 private:
  SExpr read() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    SExpr e;
    e.line = line_;
    e.col = col_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != ')') {
        e.items.push_back(read());
        skip_ws();
      }
      if (pos_ >= text_.size()) throw ParseError(e.line, e.col, "unclosed '('");
      advance();  // ')'
      return e;
    }
    if (c == ')') fail("unbalanced ')'");
    e.is_atom = true;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) {
      e.atom += text_[pos_];
      advance();
    }
    return e;
  }

  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
  static bool is_delim(char c) { return is_space(c) || c == '(' || c == ')' || c == ';'; }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (is_space(c)) {
        advance();
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace detail

struct ParseResult {
  Language language;                  // declared relations plus the mode
  std::vector<CnfFormula> instances;  // (instance ...) items in file order
  std::vector<std::string> notices;   // dropped tautologies, merged duplicates
};

namespace detail {

class FileParser {
 public:
  explicit FileParser(std::optional<Mode> mode_override) : mode_override_(mode_override) {}

  ParseResult run(std::string_view text) {
    auto items = SExprReader(text).read_all();
    ParseResult out;
    current_mode_ = mode_override_.value_or(Mode::Linear);
    bool first = true;
    for (const auto& item : items) {
      if (item.is_atom) throw ParseError(item.line, item.col, "expected a parenthesized item");
      std::string_view head = head_of(item);
      if (head == "mode") {
        if (!first) throw ParseError(item.line, item.col, "(mode ...) must be the first item");
        Mode declared = parse_mode(item);
        if (!mode_override_) current_mode_ = declared;
      } else if (head == "relation") {
        parse_relation(item, out);
      } else if (head == "instance") {
        out.instances.push_back(parse_formula_item(item, 1, out, "(instance ...)"));
      } else {
        throw ParseError(item.line, item.col, "unknown item '" + std::string(head) + "'");
      }
      first = false;
    }
    out.language.mode = current_mode_;
    return out;
  }

 private:
  static std::string_view head_of(const SExpr& e) {
    if (e.items.empty() || !e.items[0].is_atom) throw ParseError(e.line, e.col, "expected a keyword");
    return e.items[0].atom;
  }

  static Mode parse_mode(const SExpr& e) {
    if (e.items.size() != 2 || !e.items[1].is_atom)
      throw ParseError(e.line, e.col, "expected (mode linear) or (mode affine)");
    if (e.items[1].atom == "linear") return Mode::Linear;
    if (e.items[1].atom == "affine") return Mode::Affine;
    throw ParseError(e.items[1].line, e.items[1].col, "unknown mode '" + e.items[1].atom + "'");
  }

  void parse_relation(const SExpr& e, ParseResult& out) {
    if (e.items.size() != 4 || !e.items[1].is_atom)
      throw ParseError(e.line, e.col, "expected (relation NAME (VARS...) FORMULA)");
    Relation r;
    r.name = e.items[1].atom;
    if (out.language.find(r.name))
      throw ParseError(e.items[1].line, e.items[1].col, "duplicate relation '" + r.name + "'");
    r.definition = parse_formula_item(e, 2, out, "(relation ...)");
    r.arity = r.definition.arity();
    out.language.relations.push_back(std::move(r));
  }

  CnfFormula parse_formula_item(const SExpr& e, std::size_t var_pos, ParseResult& out,
                                const std::string& what) {
    if (e.items.size() != var_pos + 2)
      throw ParseError(e.line, e.col, "malformed " + what);
    CnfFormula f;
    f.variables = parse_var_list(e.items[var_pos]);
    parse_formula(e.items[var_pos + 1], f, out);
    return f;
  }

  static std::vector<Var> parse_var_list(const SExpr& e) {
    if (e.is_atom) throw ParseError(e.line, e.col, "expected a variable list");
    std::vector<Var> vars;
    for (const auto& v : e.items) {
      if (!v.is_atom || v.atom.empty() || Rational::try_parse(v.atom))
        throw ParseError(v.line, v.col, "expected a variable name");
      for (const auto& seen : vars)
        if (seen.name == v.atom)
          throw ParseError(v.line, v.col, "duplicate variable '" + v.atom + "'");
      vars.push_back({v.atom, static_cast<int>(vars.size()) + 1});
    }
    return vars;
  }

  void parse_formula(const SExpr& e, CnfFormula& f, ParseResult& out) {
    if (e.is_atom || e.items.empty() || !e.items[0].is_atom || e.items[0].atom != "and")
      throw ParseError(e.line, e.col, "expected (and CLAUSE...)");
    if (e.items.size() < 2) throw ParseError(e.line, e.col, "(and ...) needs at least one clause");
    for (std::size_t i = 1; i < e.items.size(); ++i) parse_clause(e.items[i], f, out);
  }

  void parse_clause(const SExpr& e, CnfFormula& f, ParseResult& out) {
    std::vector<Literal> lits;
    if (!e.is_atom && !e.items.empty() && e.items[0].is_atom && e.items[0].atom == "or") {
      if (e.items.size() < 2) throw ParseError(e.line, e.col, "(or ...) needs at least one literal");
      for (std::size_t i = 1; i < e.items.size(); ++i)
        lits.push_back(parse_literal(e.items[i], f));
    } else {
      lits.push_back(parse_literal(e, f));
    }
    auto norm = normalize_clause(std::move(lits));
    if (norm.merged_duplicates)
      out.notices.push_back(pos_str(e) + ": merged duplicate literals in clause");
    if (!norm.clause) {
      out.notices.push_back(pos_str(e) + ": dropped tautological clause");
      return;
    }
    f.clauses.push_back(std::move(*norm.clause));
  }

  Literal parse_literal(const SExpr& e, const CnfFormula& f) {
    if (e.is_atom || e.items.size() != 2 || !e.items[0].is_atom)
      throw ParseError(e.line, e.col, "expected (eq TERM) or (ne TERM)");
    Rel rel;
    if (e.items[0].atom == "eq")
      rel = Rel::Eq;
    else if (e.items[0].atom == "ne")
      rel = Rel::Neq;
    else
      throw ParseError(e.line, e.col, "expected (eq TERM) or (ne TERM)");
    Literal l{parse_term(e.items[1], f), rel};
    if (mode() == Mode::Affine && !literal_is_affine(l))
      throw ParseError(e.line, e.col,
                       "literal " + print_literal(l, f.variables) +
                           " is not affine-invariant (coefficients must sum to 0 with constant 0)");
    return l;
  }

  LinearTerm parse_term(const SExpr& e, const CnfFormula& f) {
    if (e.is_atom || e.items.size() < 2 || !e.items[0].is_atom || e.items[0].atom != "lin")
      throw ParseError(e.line, e.col, "expected (lin CONST (COEFF VAR)...)");
    LinearTerm t(parse_rational(e.items[1]));
    for (std::size_t i = 2; i < e.items.size(); ++i) {
      const SExpr& pair = e.items[i];
      if (pair.is_atom || pair.items.size() != 2 || !pair.items[1].is_atom)
        throw ParseError(pair.line, pair.col, "expected (COEFF VAR)");
      Rational c = parse_rational(pair.items[0]);
      const Var* v = f.find_var(pair.items[1].atom);
      if (!v)
        throw ParseError(pair.items[1].line, pair.items[1].col,
                         "undeclared variable '" + pair.items[1].atom + "'");
      t.add_var(v->index, std::move(c));
    }
    return t;
  }

  static Rational parse_rational(const SExpr& e) {
    if (!e.is_atom) throw ParseError(e.line, e.col, "expected a rational");
    auto r = Rational::try_parse(e.atom);
    if (!r) throw ParseError(e.line, e.col, "malformed rational '" + e.atom + "'");
    return *r;
  }

  Mode mode() const { return current_mode_; }

  static std::string pos_str(const SExpr& e) {
    return std::to_string(e.line) + ":" + std::to_string(e.col);
  }

  std::optional<Mode> mode_override_;
  Mode current_mode_ = Mode::Linear;
};

}  // namespace detail

/// Parses a source file per the grammar: optional (mode ...) header followed
/// by (relation ...) and (instance ...) items. `mode_override` wins over the
/// file header; affine-invariance of literals is enforced under the final mode.
inline ParseResult parse_file(std::string_view text, std::optional<Mode> mode_override = {}) {
  return detail::FileParser(mode_override).run(text);
}

/// Convenience for building relations from source text; expects exactly one
/// (relation ...) item.
inline Relation parse_relation_text(std::string_view text, std::optional<Mode> mode_override = {}) {
  auto r = parse_file(text, mode_override);
  if (r.language.relations.size() != 1)
    throw std::invalid_argument("expected exactly one relation in snippet");
  return r.language.relations.front();
}

}  // namespace csplin
