#pragma once

#include "csplin/ast.hpp"
#include "csplin/parser.hpp"

namespace csplin {
namespace fixtures {

/// S_D = {(x,y,z) : y != z and (x = y or x = z)}, the canonical hardness
/// anchor. Over the rationals this is the relation usually written S_Q.
inline Relation sd_relation(const std::string& name = "SD") {
  return parse_relation_text("(relation " + name +
                             " (x y z) (and (ne (lin 0 (1 y) (-1 z)))"
                             " (or (eq (lin 0 (1 x) (-1 y))) (eq (lin 0 (1 x) (-1 z))))))");
}

/// Binary disequality {(x,y) : x != y}.
inline Relation neq_relation(const std::string& name = "NEQ") {
  return parse_relation_text("(relation " + name + " (x y) (and (ne (lin 0 (1 x) (-1 y)))))");
}

/// {(x,y,z) : x + y = z}, the base relation of the linear structure.
inline Relation sum_relation(const std::string& name = "SUM") {
  return parse_relation_text("(relation " + name +
                             " (x y z) (and (eq (lin 0 (1 x) (1 y) (-1 z)))))");
}

/// T = {(x,y) : x != 0 and (y = 0 or x = y)}, the intermediate relation of
/// the S_D construction.
inline Relation t_relation(const std::string& name = "T") {
  return parse_relation_text("(relation " + name +
                             " (x y) (and (ne (lin 0 (1 x)))"
                             " (or (eq (lin 0 (1 y))) (eq (lin 0 (1 x) (-1 y))))))");
}

/// {x : x != 0}.
inline Relation nonzero_relation(const std::string& name = "NONZERO") {
  return parse_relation_text("(relation " + name + " (x) (and (ne (lin 0 (1 x)))))");
}

/// Hyperplane relation sum_i coeffs[i] * x_i = 0 as a one-clause definition.
inline Relation hyperplane_relation(const std::vector<Rational>& coeffs,
                                    const std::string& name = "HYP") {
  Relation r;
  r.name = name;
  r.arity = static_cast<int>(coeffs.size());
  r.definition.variables = make_vars(r.arity);
  LinearTerm t;
  for (std::size_t i = 0; i < coeffs.size(); ++i) t.add_var(static_cast<int>(i) + 1, coeffs[i]);
  auto norm = normalize_clause({Literal{std::move(t), Rel::Eq}});
  if (norm.clause) r.definition.clauses.push_back(std::move(*norm.clause));
  return r;
}

}  // namespace fixtures
}  // namespace csplin
