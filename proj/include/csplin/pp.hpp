#pragma once

#include "csplin/ast.hpp"
#include "csplin/parser.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csplin {

/*
 * Primitive positive formula: an existentially quantified conjunction of
 * atoms over a target language. Atom vocabulary matches the text format:
 *   (sum x y z)       x + y = z
 *   (fatom a b c d)   a - b + c = d
 *   (rel NAME v...)   named relation of the target language
 *   (neq u v)         u != v
 *   (zero v)          v = 0
 * Variables are ids 0..n-1; ids below free_vars.size() are free, the rest
 * are bound.
 */
struct PpAtom {
  enum class Kind { Sum, FAtom, Rel, Neq, Zero };
  Kind kind;
  std::string rel;        // Kind::Rel only
  std::vector<int> args;  // variable ids

  friend bool operator==(const PpAtom&, const PpAtom&) = default;
};

struct PpFormula {
  std::vector<std::string> free_vars;
  std::vector<std::string> bound_vars;
  std::vector<PpAtom> atoms;

  int arity() const { return static_cast<int>(free_vars.size()); }
  int var_count() const { return static_cast<int>(free_vars.size() + bound_vars.size()); }

  const std::string& var_name(int id) const {
    return id < arity() ? free_vars[id] : bound_vars[id - arity()];
  }

  friend bool operator==(const PpFormula&, const PpFormula&) = default;
};

inline std::string print_pp(const PpFormula& g) {
  std::string s = "(pp (free";
  for (const auto& v : g.free_vars) s += ' ' + v;
  s += ") (exists";
  for (const auto& v : g.bound_vars) s += ' ' + v;
  s += ") (atoms";
  for (const auto& a : g.atoms) {
    s += " (";
    switch (a.kind) {
      case PpAtom::Kind::Sum: s += "sum"; break;
      case PpAtom::Kind::FAtom: s += "fatom"; break;
      case PpAtom::Kind::Rel: s += "rel " + a.rel; break;
      case PpAtom::Kind::Neq: s += "neq"; break;
      case PpAtom::Kind::Zero: s += "zero"; break;
    }
    for (int id : a.args) s += ' ' + g.var_name(id);
    s += ')';
  }
  s += "))";
  return s;
}

inline PpFormula parse_pp(std::string_view text) {
  auto items = detail::SExprReader(text).read_all();
  if (items.size() != 1) throw std::invalid_argument("parse_pp: expected one (pp ...) form");
  const auto& e = items[0];
  auto expect_list = [](const detail::SExpr& x, std::string_view head) -> const detail::SExpr& {
    if (x.is_atom || x.items.empty() || !x.items[0].is_atom || x.items[0].atom != head)
      throw ParseError(x.line, x.col, "expected (" + std::string(head) + " ...)");
    return x;
  };
  expect_list(e, "pp");
  if (e.items.size() != 4) throw ParseError(e.line, e.col, "expected (pp (free...) (exists...) (atoms...))");
  PpFormula g;
  for (std::size_t i = 1; i < expect_list(e.items[1], "free").items.size(); ++i)
    g.free_vars.push_back(e.items[1].items[i].atom);
  for (std::size_t i = 1; i < expect_list(e.items[2], "exists").items.size(); ++i)
    g.bound_vars.push_back(e.items[2].items[i].atom);
  auto var_id = [&g](const detail::SExpr& v) {
    for (int id = 0; id < g.var_count(); ++id)
      if (g.var_name(id) == v.atom) return id;
    throw ParseError(v.line, v.col, "unknown pp variable '" + v.atom + "'");
  };
  const auto& atoms = expect_list(e.items[3], "atoms");
  for (std::size_t i = 1; i < atoms.items.size(); ++i) {
    const auto& a = atoms.items[i];
    if (a.is_atom || a.items.empty() || !a.items[0].is_atom)
      throw ParseError(a.line, a.col, "expected an atom");
    PpAtom atom;
    std::size_t arg_start = 1;
    const std::string& head = a.items[0].atom;
    std::size_t want = 0;
    if (head == "sum") { atom.kind = PpAtom::Kind::Sum; want = 3; }
    else if (head == "fatom") { atom.kind = PpAtom::Kind::FAtom; want = 4; }
    else if (head == "neq") { atom.kind = PpAtom::Kind::Neq; want = 2; }
    else if (head == "zero") { atom.kind = PpAtom::Kind::Zero; want = 1; }
    else if (head == "rel") {
      atom.kind = PpAtom::Kind::Rel;
      if (a.items.size() < 2 || !a.items[1].is_atom) throw ParseError(a.line, a.col, "rel atom needs a name");
      atom.rel = a.items[1].atom;
      arg_start = 2;
      want = a.items.size() - 2;
    } else {
      throw ParseError(a.line, a.col, "unknown atom '" + head + "'");
    }
    if (a.items.size() - arg_start != want) throw ParseError(a.line, a.col, "wrong atom arity");
    for (std::size_t k = arg_start; k < a.items.size(); ++k) atom.args.push_back(var_id(a.items[k]));
    g.atoms.push_back(std::move(atom));
  }
  return g;
}

/*
 * Expands a pp-formula into a plain CNF over all its variables (frees first,
 * ordinals 1..n): built-in atoms become unit clauses and named relations are
 * inlined as their quantifier-free definitions with arguments substituted.
 * Satisfiability of the expansion with the free variables pinned is exactly
 * pp-satisfaction.
 */
inline CnfFormula pp_expand(const PpFormula& g, const Language& lang) {
  CnfFormula f;
  for (int id = 0; id < g.var_count(); ++id) f.variables.push_back({g.var_name(id), id + 1});
  auto ord = [](int id) { return id + 1; };
  for (const auto& a : g.atoms) {
    switch (a.kind) {
      case PpAtom::Kind::Sum: {
        LinearTerm t;
        t.add_var(ord(a.args[0]), Rational(1));
        t.add_var(ord(a.args[1]), Rational(1));
        t.add_var(ord(a.args[2]), Rational(-1));
        f.clauses.push_back(Clause{{normalize({std::move(t), Rel::Eq})}});
        break;
      }
      case PpAtom::Kind::FAtom: {
        LinearTerm t;
        t.add_var(ord(a.args[0]), Rational(1));
        t.add_var(ord(a.args[1]), Rational(-1));
        t.add_var(ord(a.args[2]), Rational(1));
        t.add_var(ord(a.args[3]), Rational(-1));
        f.clauses.push_back(Clause{{normalize({std::move(t), Rel::Eq})}});
        break;
      }
      case PpAtom::Kind::Neq: {
        LinearTerm t;
        t.add_var(ord(a.args[0]), Rational(1));
        t.add_var(ord(a.args[1]), Rational(-1));
        if (t.is_zero()) throw std::invalid_argument("pp_expand: neq atom with identical arguments");
        f.clauses.push_back(Clause{{normalize({std::move(t), Rel::Neq})}});
        break;
      }
      case PpAtom::Kind::Zero:
        f.clauses.push_back(Clause{{Literal{LinearTerm::variable(ord(a.args[0])), Rel::Eq}}});
        break;
      case PpAtom::Kind::Rel: {
        const Relation* r = lang.find(a.rel);
        if (!r) throw std::invalid_argument("pp_expand: unknown relation '" + a.rel + "'");
        if (static_cast<int>(a.args.size()) != r->arity)
          throw std::invalid_argument("pp_expand: arity mismatch for '" + a.rel + "'");
        for (const Clause& c : r->definition.clauses) {
          std::vector<Literal> lits;
          for (const Literal& l : c.literals) {
            LinearTerm t(l.term.constant());
            for (const auto& [v, coeff] : l.term.coeffs()) t.add_var(ord(a.args[v - 1]), coeff);
            lits.push_back({std::move(t), l.rel});
          }
          // Substitution can collapse literals; re-normalize and drop
          // clauses that became tautological.
          auto norm = normalize_clause(std::move(lits));
          if (norm.clause) f.clauses.push_back(std::move(*norm.clause));
        }
        break;
      }
    }
  }
  return f;
}

}  // namespace csplin
