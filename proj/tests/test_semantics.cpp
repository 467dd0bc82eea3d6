#include "csplin/semantics.hpp"

#include <catch_amalgamated.hpp>

#include "csplin/gen.hpp"
#include "csplin/parser.hpp"
#include "oracles.hpp"

#include <random>

using namespace csplin;

namespace {

CnfFormula instance_of(const char* text) { return parse_file(text).instances.at(0); }

LinearTerm term(std::initializer_list<std::pair<int, int>> coeffs, int constant = 0) {
  LinearTerm t{Rational(constant)};
  for (auto [v, c] : coeffs) t.add_var(v, Rational(c));
  return t;
}

}  // namespace

TEST_CASE("sat_conj distinguishes its two unsat causes") {
  ConjSystem forced;
  forced.equalities = {term({{1, 1}, {2, 1}, {3, -1}}), term({{1, 1}}), term({{2, 1}})};
  forced.disequalities = {term({{3, 1}})};
  auto r1 = sat_conj(forced, 3);
  REQUIRE_FALSE(is_sat(r1));
  CHECK(std::get<ConjUnsat>(r1).cause == ConjUnsat::Cause::ForcedZeroDisequality);
  CHECK(std::get<ConjUnsat>(r1).index == 0);

  ConjSystem incon;
  incon.equalities = {term({{1, 1}}, -1), term({{1, 1}}, -2)};
  auto r2 = sat_conj(incon, 1);
  REQUIRE_FALSE(is_sat(r2));
  CHECK(std::get<ConjUnsat>(r2).cause == ConjUnsat::Cause::InconsistentEqualities);
  CHECK(std::get<ConjUnsat>(r2).index == 1);

  ConjSystem sat;
  sat.equalities = {term({{1, 1}, {2, -1}})};
  sat.disequalities = {term({{1, 1}, {4, -1}})};
  auto r3 = sat_conj(sat, 4);
  REQUIRE(is_sat(r3));
  const Assignment& w = std::get<ConjSat>(r3).witness;
  CHECK(w.at(1) == w.at(2));
  CHECK(w.at(1) != w.at(4));

  ConjSystem diseqs;
  diseqs.disequalities = {term({{1, 1}}), term({{1, 1}, {2, -1}}), term({{2, 1}})};
  auto r4 = sat_conj(diseqs, 2);
  REQUIRE(is_sat(r4));
  for (const auto& d : diseqs.disequalities)
    CHECK_FALSE(d.evaluate(std::get<ConjSat>(r4).witness).is_zero());
}

TEST_CASE("sat_cnf on the worked examples") {
  CnfFormula sq = instance_of(
      "(instance (x y z) (and (ne (lin 0 (1 y) (-1 z)))"
      " (or (eq (lin 0 (1 x) (-1 y))) (eq (lin 0 (1 x) (-1 z))))))");
  auto r = sat_cnf(sq);
  REQUIRE(is_sat(r));
  CHECK(sq.evaluate(std::get<CnfSat>(r).witness));

  CnfFormula contra = instance_of(
      "(instance (x y) (and (or (eq (lin 0 (1 x))) (eq (lin 0 (1 y))))"
      " (ne (lin 0 (1 x))) (ne (lin 0 (1 y)))))");
  CHECK_FALSE(is_sat(sat_cnf(contra)));

  CnfFormula example2 = instance_of(
      "(instance (x y u v) (and"
      " (or (eq (lin 0 (1 x) (-2 y))) (eq (lin 0 (1 y) (-1 u) (-1 v))))"
      " (ne (lin 0 (1 x) (-1 u)))))");
  CHECK(is_sat(sat_cnf(example2)));
}

TEST_CASE("the branch budget is enforced") {
  // 12 three-way clauses explode past a tiny budget
  CnfFormula f;
  f.variables = make_vars(3);
  for (int i = 0; i < 12; ++i) {
    Clause c;
    for (int v = 1; v <= 3; ++v)
      c.literals.push_back({LinearTerm::variable(v, Rational(i + v)), Rel::Neq});
    f.clauses.push_back(c);
  }
  SemanticsConfig tiny;
  tiny.branch_budget = 10;
  CHECK_THROWS_AS(sat_cnf(f, tiny), BudgetExceeded);
}

TEST_CASE("equivalence by clause-wise negation") {
  CnfFormula f = instance_of(
      "(instance (x y z) (and (or (eq (lin 0 (1 x) (-1 y))) (eq (lin 0 (1 x) (-1 z))))))");
  CHECK(equivalent(f, f));
  CnfFormula g = instance_of("(instance (x y z) (and (eq (lin 0 (1 x) (-1 y)))))");
  CHECK_FALSE(equivalent(f, g));
  // (x=y | x=y | x!=x) collapses to (x=y): the parser merges and the oracle agrees
  CnfFormula h = instance_of(
      "(instance (x y z) (and (or (eq (lin 0 (1 x) (-1 y))) (eq (lin 0 (2 x) (-2 y)))"
      " (ne (lin 0)))))");
  CHECK(equivalent(h, g));
  CnfFormula other_arity = instance_of("(instance (x) (and (eq (lin 0 (1 x)))))");
  CHECK_THROWS_AS(equivalent(f, other_arity), std::invalid_argument);
}

TEST_CASE("zero tuple membership") {
  auto rel = [](const char* text) { return parse_file(text).language.relations.at(0); };
  CHECK(contains_zero_tuple(rel("(relation A (x y z) (and (eq (lin 0 (1 x) (1 y) (-1 z)))))")));
  CHECK_FALSE(contains_zero_tuple(rel(
      "(relation S (x y z) (and (ne (lin 0 (1 y) (-1 z)))"
      " (or (eq (lin 0 (1 x) (-1 y))) (eq (lin 0 (1 x) (-1 z))))))")));
  CHECK_FALSE(contains_zero_tuple(rel("(relation N (x y) (and (ne (lin 0 (1 x) (-1 y)))))")));
}

TEST_CASE("sample oracle finds witnesses but never refutes") {
  CnfFormula neq = instance_of("(instance (x y) (and (ne (lin 0 (1 x) (-1 y)))))");
  SampleResult found = sample_oracle(neq, 100, 1);
  CHECK(found.found);
  CHECK(neq.evaluate(found.witness));
  // deterministic replay
  SampleResult again = sample_oracle(neq, 100, 1);
  CHECK(again.trial == found.trial);
  CHECK(again.witness == found.witness);

  CnfFormula unsat = instance_of(
      "(instance (x) (and (eq (lin 0 (1 x))) (ne (lin 0 (1 x)))))");
  CHECK_FALSE(sample_oracle(unsat, 200, 2).found);
  CHECK_THROWS_AS(sample_oracle(neq, 0, 1), std::invalid_argument);
}

TEST_CASE("sat_cnf agrees with full DNF expansion on an enumerated corpus") {
  // literal pool over three variables
  std::vector<Literal> pool = {
      {term({{1, 1}}), Rel::Eq},           {term({{1, 1}, {2, -1}}), Rel::Neq},
      {term({{2, 1}, {3, -1}}), Rel::Eq},  {term({{1, 1}, {3, -1}}), Rel::Neq},
      {term({{1, 1}, {2, 1}}), Rel::Eq},   {term({{3, 1}}), Rel::Neq},
  };
  std::vector<Clause> clauses;
  for (std::size_t a = 0; a < pool.size(); ++a) {
    clauses.push_back(Clause{{pool[a]}});
    for (std::size_t b = a + 1; b < pool.size(); ++b)
      clauses.push_back(Clause{{pool[a], pool[b]}});
  }
  long cases = 0;
  for (std::size_t i = 0; i < clauses.size(); ++i)
    for (std::size_t j = i; j < clauses.size(); ++j) {
      CnfFormula f;
      f.variables = make_vars(3);
      f.clauses = {clauses[i], clauses[j]};
      ++cases;
      CHECK(is_sat(sat_cnf(f)) == test_oracles::dnf_sat(f));
    }
  CHECK(cases > 200);
}

TEST_CASE("sample oracle never contradicts the complete search") {
  std::mt19937_64 rng(909);
  HornGenSpec spec;
  for (int i = 0; i < 300; ++i) {
    CnfFormula f = random_horn_formula(rng, spec);
    bool exact = is_sat(sat_cnf(f));
    SampleResult s = sample_oracle(f, 60, i);
    if (s.found) CHECK(exact);
  }
}
