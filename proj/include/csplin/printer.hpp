#pragma once

#include "csplin/ast.hpp"

#include <string>
#include <vector>

namespace csplin {

// Canonical text forms. parse(print(v)) == v for values already in canonical
// form; printing a freshly parsed value reproduces its text.

inline std::string print_term(const LinearTerm& t, const std::vector<Var>& vars) {
  std::string s = "(lin " + t.constant().to_string();
  for (const auto& [v, c] : t.coeffs()) {
    s += " (" + c.to_string() + ' ';
    s += (v >= 1 && v <= static_cast<int>(vars.size())) ? vars[v - 1].name
                                                        : "v" + std::to_string(v);
    s += ')';
  }
  s += ')';
  return s;
}

inline std::string print_literal(const Literal& l, const std::vector<Var>& vars) {
  return std::string(l.is_eq() ? "(eq " : "(ne ") + print_term(l.term, vars) + ')';
}

inline std::string print_clause(const Clause& c, const std::vector<Var>& vars) {
  if (c.size() == 1) return print_literal(c.literals.front(), vars);
  std::string s = "(or";
  for (const auto& l : c.literals) s += ' ' + print_literal(l, vars);
  s += ')';
  return s;
}

inline std::string print_formula(const CnfFormula& f) {
  std::string s = "(and";
  for (const auto& c : f.clauses) s += ' ' + print_clause(c, f.variables);
  s += ')';
  return s;
}

inline std::string print_var_list(const std::vector<Var>& vars) {
  std::string s = "(";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) s += ' ';
    s += vars[i].name;
  }
  s += ')';
  return s;
}

inline std::string print_relation(const Relation& r) {
  return "(relation " + r.name + ' ' + print_var_list(r.definition.variables) + ' ' +
         print_formula(r.definition) + ')';
}

inline std::string print_instance(const CnfFormula& f) {
  return "(instance " + print_var_list(f.variables) + ' ' + print_formula(f) + ')';
}

inline std::string print_language(const Language& lang) {
  std::string s = "(mode " + std::string(mode_name(lang.mode)) + ")\n";
  for (const auto& r : lang.relations) s += print_relation(r) + '\n';
  return s;
}

inline std::string print_assignment(const Assignment& a, const std::vector<Var>& vars) {
  std::string s;
  for (const auto& v : vars) {
    if (!s.empty()) s += ' ';
    auto it = a.find(v.index);
    s += v.name + '=' + (it == a.end() ? "?" : it->second.to_string());
  }
  return s;
}

}  // namespace csplin
