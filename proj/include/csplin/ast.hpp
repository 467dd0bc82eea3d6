#pragma once

#include "csplin/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csplin {

/// Named variable with its 1-based ordinal within a formula context. The
/// ordinal fixes the witness ordering, so it is part of the value.
struct Var {
  std::string name;
  int index = 0;

  friend bool operator==(const Var&, const Var&) = default;
};

using Assignment = std::map<int, Rational>;  // ordinal -> value

/*
 * Linear combination of variables plus a constant, kept sparse and sorted by
 * variable ordinal with no zero coefficients stored. The empty map with zero
 * constant is the zero term.
 */
class LinearTerm {
 public:
  LinearTerm() = default;
  explicit LinearTerm(Rational constant) : constant_(std::move(constant)) {}

  static LinearTerm variable(int ordinal, Rational coeff = Rational(1)) {
    LinearTerm t;
    t.add_var(ordinal, std::move(coeff));
    return t;
  }

  const std::vector<std::pair<int, Rational>>& coeffs() const { return coeffs_; }
  const Rational& constant() const { return constant_; }

  bool is_zero() const { return coeffs_.empty() && constant_.is_zero(); }
  bool has_vars() const { return !coeffs_.empty(); }
  std::size_t num_vars() const { return coeffs_.size(); }

  int leading_var() const { return coeffs_.front().first; }
  const Rational& leading_coeff() const { return coeffs_.front().second; }

  Rational coeff(int ordinal) const {
    for (const auto& [v, c] : coeffs_)
      if (v == ordinal) return c;
    return Rational(0);
  }

  void add_var(int ordinal, Rational coeff) {
    if (coeff.is_zero()) return;
    auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), ordinal,
                               [](const auto& p, int v) { return p.first < v; });
    if (it != coeffs_.end() && it->first == ordinal) {
      it->second += coeff;
      if (it->second.is_zero()) coeffs_.erase(it);
    } else {
      coeffs_.insert(it, {ordinal, std::move(coeff)});
    }
  }

  void add_constant(const Rational& c) { constant_ += c; }

  /// *this += k * other, merging sorted coefficient lists.
  void add_scaled(const LinearTerm& other, const Rational& k) {
    if (k.is_zero()) return;
    std::vector<std::pair<int, Rational>> merged;
    merged.reserve(coeffs_.size() + other.coeffs_.size());
    auto a = coeffs_.begin();
    auto b = other.coeffs_.begin();
    while (a != coeffs_.end() || b != other.coeffs_.end()) {
      if (b == other.coeffs_.end() || (a != coeffs_.end() && a->first < b->first)) {
        merged.push_back(*a++);
      } else if (a == coeffs_.end() || b->first < a->first) {
        Rational c = b->second * k;
        if (!c.is_zero()) merged.emplace_back(b->first, std::move(c));
        ++b;
      } else {
        Rational c = a->second + b->second * k;
        if (!c.is_zero()) merged.emplace_back(a->first, std::move(c));
        ++a;
        ++b;
      }
    }
    coeffs_ = std::move(merged);
    constant_ += other.constant_ * k;
  }

  LinearTerm scaled(const Rational& k) const {
    LinearTerm t;
    if (k.is_zero()) return t;
    t.coeffs_.reserve(coeffs_.size());
    for (const auto& [v, c] : coeffs_) t.coeffs_.emplace_back(v, c * k);
    t.constant_ = constant_ * k;
    return t;
  }

  friend LinearTerm operator+(LinearTerm a, const LinearTerm& b) {
    a.add_scaled(b, Rational(1));
    return a;
  }
  friend LinearTerm operator-(LinearTerm a, const LinearTerm& b) {
    a.add_scaled(b, Rational(-1));
    return a;
  }

  /// Sum of all variable coefficients (the affine-invariance test value).
  Rational coeff_sum() const {
    Rational s;
    for (const auto& [v, c] : coeffs_) s += c;
    return s;
  }

  /// Total representation size of all coefficients and the constant.
  std::size_t bit_size() const {
    std::size_t s = constant_.bit_size();
    for (const auto& [v, c] : coeffs_) s += c.bit_size();
    return s;
  }

  Rational evaluate(const Assignment& a) const {
    Rational acc = constant_;
    for (const auto& [v, c] : coeffs_) {
      auto it = a.find(v);
      if (it == a.end())
        throw std::invalid_argument("evaluate: no value for variable ordinal " + std::to_string(v));
      acc += c * it->second;
    }
    return acc;
  }

  /// Replaces every occurrence of `from` by the variable `to`.
  LinearTerm rename_var(int from, int to) const {
    LinearTerm t;
    t.constant_ = constant_;
    for (const auto& [v, c] : coeffs_) t.add_var(v == from ? to : v, c);
    return t;
  }

  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;

 private:
  std::vector<std::pair<int, Rational>> coeffs_;
  Rational constant_;
};

enum class Rel { Eq, Neq };  // term = 0 / term != 0

/// Eq literals are the positive literals, Neq the negative ones.
struct Literal {
  LinearTerm term;
  Rel rel = Rel::Eq;

  bool is_eq() const { return rel == Rel::Eq; }

  bool evaluate(const Assignment& a) const {
    bool zero = term.evaluate(a).is_zero();
    return rel == Rel::Eq ? zero : !zero;
  }

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Canonical scaling: if the term has any variable, divide through so the
/// lowest-ordinal coefficient is +1. Scaling never changes the zero set.
inline Literal normalize(Literal l) {
  if (l.term.has_vars() && !l.term.leading_coeff().is_one())
    l.term = l.term.scaled(Rational(1) / l.term.leading_coeff());
  return l;
}

inline Literal negate(Literal l) {
  l.rel = l.rel == Rel::Eq ? Rel::Neq : Rel::Eq;
  return l;
}

/// Duplicate-free ordered disjunction. An empty clause is falsity and is
/// permitted only as an unsatisfiability marker inside the solver.
struct Clause {
  std::vector<Literal> literals;

  bool empty() const { return literals.empty(); }
  std::size_t size() const { return literals.size(); }

  int count_eq() const {
    int n = 0;
    for (const auto& l : literals) n += l.is_eq() ? 1 : 0;
    return n;
  }

  bool evaluate(const Assignment& a) const {
    for (const auto& l : literals)
      if (l.evaluate(a)) return true;
    return false;
  }

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct NormalizedClause {
  std::optional<Clause> clause;  // empty when the clause is a tautology
  bool merged_duplicates = false;
};

/// Normalizes literals, merges duplicates silently, and detects tautologies:
/// a complementary (Eq t, Neq t) pair or the true literal Eq(0).
inline NormalizedClause normalize_clause(std::vector<Literal> literals) {
  NormalizedClause out;
  Clause c;
  for (auto& raw : literals) {
    Literal l = normalize(std::move(raw));
    if (l.is_eq() && l.term.is_zero()) return out;  // tautology
    bool dup = false;
    for (const auto& kept : c.literals) {
      if (kept.term == l.term) {
        if (kept.rel != l.rel) return out;  // complementary pair
        dup = true;
        break;
      }
    }
    if (dup) {
      out.merged_duplicates = true;
      continue;
    }
    c.literals.push_back(std::move(l));
  }
  out.clause = std::move(c);
  return out;
}

struct CnfFormula {
  std::vector<Var> variables;  // ordinals contiguous from 1
  std::vector<Clause> clauses;

  int arity() const { return static_cast<int>(variables.size()); }

  bool evaluate(const Assignment& a) const {
    for (const auto& c : clauses)
      if (!c.evaluate(a)) return false;
    return true;
  }

  const Var* find_var(std::string_view name) const {
    for (const auto& v : variables)
      if (v.name == name) return &v;
    return nullptr;
  }

  std::size_t bit_size() const {
    std::size_t s = 0;
    for (const auto& c : clauses)
      for (const auto& l : c.literals) s += l.term.bit_size();
    return s;
  }

  std::size_t literal_count() const {
    std::size_t n = 0;
    for (const auto& c : clauses) n += c.size();
    return n;
  }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

/// Standard variable list x1..xk used by relation definitions and fixtures.
inline std::vector<Var> make_vars(int arity, std::string_view prefix = "x") {
  std::vector<Var> vs;
  vs.reserve(arity);
  for (int i = 1; i <= arity; ++i) vs.push_back({std::string(prefix) + std::to_string(i), i});
  return vs;
}

inline Assignment zero_assignment(int arity) {
  Assignment a;
  for (int i = 1; i <= arity; ++i) a[i] = Rational(0);
  return a;
}

struct Relation {
  std::string name;
  int arity = 0;
  CnfFormula definition;  // free variables exactly the declared x1..xk
};

enum class Mode { Linear, Affine };

inline std::string_view mode_name(Mode m) { return m == Mode::Linear ? "linear" : "affine"; }

/// A literal is affine-invariant iff its coefficients sum to 0 and it has no
/// constant part; such literals are preserved by every map x -> ax + b.
inline bool literal_is_affine(const Literal& l) {
  return l.term.coeff_sum().is_zero() && l.term.constant().is_zero();
}

inline bool formula_is_affine(const CnfFormula& f) {
  for (const auto& c : f.clauses)
    for (const auto& l : c.literals)
      if (!literal_is_affine(l)) return false;
  return true;
}

inline bool formula_is_constant_free(const CnfFormula& f) {
  for (const auto& c : f.clauses)
    for (const auto& l : c.literals)
      if (!l.term.constant().is_zero()) return false;
  return true;
}

struct Language {
  Mode mode = Mode::Linear;
  std::vector<Relation> relations;

  const Relation* find(std::string_view name) const {
    for (const auto& r : relations)
      if (r.name == name) return &r;
    return nullptr;
  }
};

}  // namespace csplin
