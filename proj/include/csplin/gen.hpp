#pragma once

#include "csplin/ast.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace csplin {

struct HornGenSpec {
  int max_vars = 6;
  int max_clauses = 8;
  int coeff_bound = 3;
  int max_clause_size = 3;
  int max_term_vars = 3;
};

namespace detail {

inline LinearTerm random_term(std::mt19937_64& rng, int num_vars, const HornGenSpec& spec) {
  std::uniform_int_distribution<int> nvars_dist(1, std::min(spec.max_term_vars, num_vars));
  std::uniform_int_distribution<int> var_dist(1, num_vars);
  std::uniform_int_distribution<int> coeff_dist(1, 2 * spec.coeff_bound);
  LinearTerm t;
  int picks = nvars_dist(rng);
  for (int i = 0; i < picks; ++i) {
    int c = coeff_dist(rng);
    t.add_var(var_dist(rng), Rational(c <= spec.coeff_bound ? c : spec.coeff_bound - c));
  }
  if (t.is_zero()) t.add_var(var_dist(rng), Rational(1));
  return t;
}

}  // namespace detail

/// Random Horn formula: homogeneous terms, at most one Eq literal per clause.
inline CnfFormula random_horn_formula(std::mt19937_64& rng, const HornGenSpec& spec = {}) {
  std::uniform_int_distribution<int> nvars_dist(1, spec.max_vars);
  std::uniform_int_distribution<int> nclauses_dist(1, spec.max_clauses);
  std::uniform_int_distribution<int> size_dist(1, spec.max_clause_size);
  std::uniform_int_distribution<int> coin(0, 1);
  CnfFormula f;
  int num_vars = nvars_dist(rng);
  f.variables = make_vars(num_vars);
  int num_clauses = nclauses_dist(rng);
  for (int c = 0; c < num_clauses; ++c) {
    int size = size_dist(rng);
    bool with_eq = coin(rng) == 1;
    std::vector<Literal> lits;
    for (int i = 0; i < size; ++i) {
      Rel rel = (with_eq && i == size - 1) ? Rel::Eq : Rel::Neq;
      lits.push_back({detail::random_term(rng, num_vars, spec), rel});
    }
    auto norm = normalize_clause(std::move(lits));
    if (norm.clause && !norm.clause->empty()) f.clauses.push_back(std::move(*norm.clause));
  }
  return f;
}

/// Random homogeneous equation set for elimination tests.
inline std::vector<LinearTerm> random_equations(std::mt19937_64& rng, int num_vars, int count,
                                                int coeff_bound) {
  HornGenSpec spec;
  spec.coeff_bound = coeff_bound;
  spec.max_term_vars = num_vars;
  std::vector<LinearTerm> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(detail::random_term(rng, num_vars, spec));
  return out;
}

/*
 * Benchmark family: a propagation chain (x1 = 0, then ne(x_{i-1}) | eq(x_i -
 * x_{i-1}) clauses that promote one unit per round) plus disequality clauses
 * over a separate block of variables that stay residual. `chain_fraction`
 * controls how the literal budget splits between the two parts.
 */
inline CnfFormula bench_chain_instance(int target_literals, std::uint64_t seed,
                                       double chain_fraction = 0.5) {
  std::mt19937_64 rng(seed);
  if (target_literals < 8) target_literals = 8;
  int chain_literals = static_cast<int>(target_literals * chain_fraction);
  int chain_len = std::max(2, (chain_literals - 1) / 2);
  int diseq_clauses = std::max(1, (target_literals - (1 + 2 * (chain_len - 1))) / 2);
  int free_vars = std::max(4, diseq_clauses / 4);

  CnfFormula f;
  int num_vars = chain_len + free_vars;
  f.variables = make_vars(num_vars);
  f.clauses.push_back(Clause{{Literal{LinearTerm::variable(1), Rel::Eq}}});
  for (int i = 2; i <= chain_len; ++i) {
    LinearTerm step = LinearTerm::variable(i);
    step.add_var(i - 1, Rational(-1));
    f.clauses.push_back(Clause{{Literal{LinearTerm::variable(i - 1), Rel::Neq},
                                Literal{std::move(step), Rel::Eq}}});
  }
  std::uniform_int_distribution<int> free_dist(chain_len + 1, num_vars);
  for (int c = 0; c < diseq_clauses; ++c) {
    std::vector<Literal> lits;
    for (int k = 0; k < 2; ++k) {
      int a = free_dist(rng), b = free_dist(rng);
      while (b == a) b = free_dist(rng);
      LinearTerm t = LinearTerm::variable(a);
      t.add_var(b, Rational(-1));
      lits.push_back({std::move(t), Rel::Neq});
    }
    auto norm = normalize_clause(std::move(lits));
    if (norm.clause) f.clauses.push_back(std::move(*norm.clause));
  }
  return f;
}

}  // namespace csplin
