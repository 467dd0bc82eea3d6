#include "csplin/classify.hpp"

#include <catch_amalgamated.hpp>

#include "csplin/parser.hpp"
#include "csplin/pp.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <random>

using namespace csplin;

namespace {

Language language_of(const std::string& text) { return parse_file(text).language; }

const char* kSq =
    "(relation S (x y z) (and (ne (lin 0 (1 y) (-1 z)))"
    " (or (eq (lin 0 (1 x) (-1 y))) (eq (lin 0 (1 x) (-1 z))))))";

}  // namespace

TEST_CASE("is_horn counts positive literals per clause") {
  auto f = [](const char* text) { return parse_file(text).instances.at(0); };
  CHECK(is_horn(f("(instance (x y z) (and (or (ne (lin 0 (1 x))) (eq (lin 0 (1 x) (-1 y))))"
                  " (eq (lin 0 (1 z)))))")));
  CHECK_FALSE(is_horn(f("(instance (x y) (and (or (eq (lin 0 (1 x))) (eq (lin 0 (1 y))))))")));
  CnfFormula empty;
  CHECK(is_horn(empty));
}

TEST_CASE("reduction removes redundant literals") {
  // duplicate clause is dropped in preprocessing
  CnfFormula dup;
  dup.variables = make_vars(2);
  LinearTerm xy = LinearTerm::variable(1);
  xy.add_var(2, Rational(-1));
  dup.clauses = {Clause{{Literal{xy, Rel::Eq}}}, Clause{{Literal{xy, Rel::Eq}}}};
  ReducedForm r1 = reduce_formula(dup);
  CHECK(r1.reduced.clauses.size() == 1);
  CHECK(r1.dropped_clauses == 1);

  // a false literal inside a clause is removed by the equivalence loop
  CnfFormula with_false;
  with_false.variables = make_vars(2);
  with_false.clauses = {Clause{{Literal{xy, Rel::Eq}, Literal{LinearTerm{}, Rel::Neq}}}};
  ReducedForm r2 = reduce_formula(with_false);
  REQUIRE(r2.reduced.clauses.size() == 1);
  CHECK(r2.reduced.clauses[0].size() == 1);
  CHECK(r2.removal_log.size() == 1);
  CHECK(equivalent(r2.reduced, with_false));
}

TEST_CASE("the S_Q definition is already reduced") {
  Language lang = language_of(kSq);
  const CnfFormula& def = lang.relations[0].definition;
  ReducedForm red = reduce_formula(def);
  CHECK(red.reduced == def);
  CHECK(red.removal_log.empty());
  // cross-check: every single-literal removal changes the relation
  for (std::size_t ci = 0; ci < def.clauses.size(); ++ci)
    for (std::size_t li = 0; li < def.clauses[ci].size(); ++li) {
      CnfFormula candidate = def;
      auto& lits = candidate.clauses[ci].literals;
      lits.erase(lits.begin() + static_cast<long>(li));
      if (candidate.clauses[ci].empty()) candidate.clauses.erase(candidate.clauses.begin() + ci);
      CHECK_FALSE(equivalent(candidate, def));
    }
}

TEST_CASE("unsatisfiable definitions collapse to the canonical empty form") {
  auto lang = language_of(
      "(relation E (x) (and (eq (lin 0 (1 x))) (ne (lin 0 (1 x)))))");
  ReducedForm red = reduce_formula(lang.relations[0].definition);
  CHECK(red.collapsed_unsat);
  REQUIRE(red.reduced.clauses.size() == 1);
  REQUIRE(red.reduced.clauses[0].size() == 1);
  CHECK(red.reduced.clauses[0].literals[0].rel == Rel::Neq);
  CHECK(red.reduced.clauses[0].literals[0].term.is_zero());
  CHECK(is_horn(red.reduced));
  CHECK(equivalent(red.reduced, lang.relations[0].definition));
}

TEST_CASE("reduction output is equivalent to its input on random formulas") {
  std::mt19937_64 rng(31);
  HornGenSpec spec;
  spec.max_vars = 4;
  spec.max_clauses = 4;
  for (int i = 0; i < 60; ++i) {
    CnfFormula f = random_horn_formula(rng, spec);
    ReducedForm red = reduce_formula(f);
    CHECK(equivalent(red.reduced, f));
    // reduced means no further removal is possible
    if (!red.collapsed_unsat)
      for (std::size_t ci = 0; ci < red.reduced.clauses.size(); ++ci) {
        if (red.reduced.clauses[ci].size() == 1) continue;
        for (std::size_t li = 0; li < red.reduced.clauses[ci].size(); ++li) {
          CnfFormula candidate = red.reduced;
          auto& lits = candidate.clauses[ci].literals;
          lits.erase(lits.begin() + static_cast<long>(li));
          CHECK_FALSE(equivalent(candidate, red.reduced));
        }
      }
  }
}

TEST_CASE("classifier catalogue") {
  auto verdict = [](const std::string& text) {
    return classify(language_of(text)).verdict;
  };
  CHECK(verdict("(relation A (x y z) (and (eq (lin 0 (1 x) (1 y) (-1 z)))))") ==
        Verdict::HornTractable);
  CHECK(verdict(kSq) == Verdict::NpHard);
  CHECK(verdict("(relation EX (x y u v) (and"
                " (or (eq (lin 0 (1 x) (-2 y))) (eq (lin 0 (1 y) (-1 u) (-1 v))))"
                " (ne (lin 0 (1 x) (-1 u)))))") == Verdict::NpHard);
  CHECK(verdict("(relation J (x y z) (and"
                " (or (eq (lin 0 (1 x) (-1 y))) (eq (lin 0 (1 x) (-1 z))))))") ==
        Verdict::ZeroTupleTractable);
  CHECK(verdict("(mode affine)(relation F (x y z w) (and"
                " (eq (lin 0 (1 x) (-1 y) (-1 z) (1 w)))))") == Verdict::HornTractable);
  CHECK(verdict("(mode affine)" + std::string(kSq)) == Verdict::NpHard);
}

TEST_CASE("np-hard reports carry verified gadgets and witness tuples") {
  ClassificationReport rep = classify(language_of(kSq));
  REQUIRE(rep.hardness.has_value());
  const auto& h = *rep.hardness;
  CHECK(h.violator == "S");
  CHECK(h.zero_avoider == "S");
  CHECK(h.neq_gadget.has_value());
  CHECK(h.neq_points > 0);
  CHECK(h.sd_points > 0);
  REQUIRE(h.witness.p.size() == 3);
  // p satisfies literal l1 of the flagged clause and no other
  Language lang = language_of(kSq);
  Assignment pa, qa;
  for (int v = 1; v <= 3; ++v) {
    pa[v] = h.witness.p[v - 1];
    qa[v] = h.witness.q[v - 1];
  }
  const Clause& c = lang.relations[0].definition.clauses[h.witness.clause_index];
  CHECK(lang.relations[0].definition.evaluate(pa));
  CHECK(lang.relations[0].definition.evaluate(qa));
  CHECK(c.literals[h.witness.lit1].evaluate(pa));
  CHECK_FALSE(c.literals[h.witness.lit2].evaluate(pa));
  CHECK(c.literals[h.witness.lit2].evaluate(qa));
  CHECK_FALSE(c.literals[h.witness.lit1].evaluate(qa));
}

TEST_CASE("verdicts are stable under permutation and renaming") {
  std::string two =
      "(relation A (x y z) (and (eq (lin 0 (1 x) (1 y) (-1 z)))))" + std::string(kSq);
  std::string swapped =
      std::string(kSq) + "(relation A (x y z) (and (eq (lin 0 (1 x) (1 y) (-1 z)))))";
  CHECK(classify(language_of(two)).verdict == classify(language_of(swapped)).verdict);
  std::string renamed =
      "(relation S (a b c) (and (ne (lin 0 (1 b) (-1 c)))"
      " (or (eq (lin 0 (1 a) (-1 b))) (eq (lin 0 (1 a) (-1 c))))))";
  CHECK(classify(language_of(renamed)).verdict == Verdict::NpHard);
}

TEST_CASE("classification rejects inputs outside the paper's languages") {
  CHECK_THROWS_AS(classify(language_of("(relation C (x) (and (eq (lin -1 (1 x)))))")),
                  std::invalid_argument);
}

TEST_CASE("horn-tractable languages route instances through the solver") {
  Language lang = language_of(
      "(relation A (x y z) (and (eq (lin 0 (1 x) (1 y) (-1 z)))))"
      "(relation B (x y) (and (or (ne (lin 0 (1 x))) (eq (lin 0 (1 x) (-1 y))))))");
  REQUIRE(classify(lang).verdict == Verdict::HornTractable);
  // random pp-instances over the language: conjunctions of relation atoms
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> var(0, 4);
  std::uniform_int_distribution<int> which(0, 1);
  for (int i = 0; i < 120; ++i) {
    PpFormula inst;
    inst.free_vars = {"v1", "v2", "v3", "v4", "v5"};
    int atoms = 1 + i % 4;
    for (int a = 0; a < atoms; ++a) {
      if (which(rng))
        inst.atoms.push_back({PpAtom::Kind::Rel, "A", {var(rng), var(rng), var(rng)}});
      else
        inst.atoms.push_back({PpAtom::Kind::Rel, "B", {var(rng), var(rng)}});
    }
    CnfFormula f = pp_expand(inst, lang);
    bool via_solver = is_sat(solve(HornInstance(f)));
    CHECK(via_solver == is_sat(sat_cnf(f)));
  }
}

TEST_CASE("zero-tuple languages are satisfied by the zero assignment") {
  Language lang = language_of(
      "(relation J (x y z) (and (or (eq (lin 0 (1 x) (-1 y))) (eq (lin 0 (1 x) (-1 z))))))");
  REQUIRE(classify(lang).verdict == Verdict::ZeroTupleTractable);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> var(0, 3);
  for (int i = 0; i < 60; ++i) {
    PpFormula inst;
    inst.free_vars = {"v1", "v2", "v3", "v4"};
    for (int a = 0; a < 1 + i % 3; ++a)
      inst.atoms.push_back({PpAtom::Kind::Rel, "J", {var(rng), var(rng), var(rng)}});
    CnfFormula f = pp_expand(inst, lang);
    CHECK(f.evaluate(zero_assignment(f.arity())));
  }
}

TEST_CASE("reports serialize both ways and the structured form re-parses") {
  ClassificationReport rep = classify(language_of(kSq));
  std::string text = rep.to_text();
  CHECK(text.find("NP-HARD") != std::string::npos);
  StructuredDoc doc = rep.to_structured();
  std::string blob = write_structured(doc);
  StructuredDoc parsed = read_structured(blob);
  CHECK(parsed == doc);
  REQUIRE(structured_find(parsed, "verdict"));
  CHECK(*structured_find(parsed, "verdict") == "NP-HARD");
  // the embedded gadget text parses back into a pp-formula
  const std::string* gtext = structured_find(parsed, "hardness.sd_gadget");
  REQUIRE(gtext);
  PpFormula g = parse_pp(*gtext);
  CHECK(g.arity() == 3);
}
