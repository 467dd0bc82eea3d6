#pragma once

#include "csplin/ast.hpp"
#include "csplin/gadgets.hpp"
#include "csplin/printer.hpp"
#include "csplin/semantics.hpp"
#include "csplin/structured.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csplin {

/// True iff every clause has at most one positive (Eq) literal.
inline bool is_horn(const CnfFormula& f) {
  for (const auto& c : f.clauses)
    if (c.count_eq() > 1) return false;
  return true;
}

struct ReducedForm {
  CnfFormula reduced;
  std::vector<std::pair<int, int>> removal_log;  // (clause, literal) at removal time
  int dropped_clauses = 0;                       // tautologies and duplicates
  bool collapsed_unsat = false;                  // canonical (ne 0) stand-in
};

/*
 * Fixpoint of single-literal removals under semantic equivalence, scanning
 * clauses then literals and restarting after each successful removal.
 * Tautological and duplicate clauses are dropped first. Unsatisfiable
 * definitions collapse to the canonical one-clause form (ne 0), which is
 * Horn; an empty relation is always Horn-definable.
 */
inline ReducedForm reduce_formula(const CnfFormula& f, const SemanticsConfig& cfg = {}) {
  ReducedForm out;
  CnfFormula cur;
  cur.variables = f.variables;
  for (const Clause& c : f.clauses) {
    auto norm = normalize_clause(c.literals);
    if (!norm.clause) {
      ++out.dropped_clauses;
      continue;
    }
    bool dup = false;
    for (const auto& seen : cur.clauses)
      if (seen == *norm.clause) {
        dup = true;
        break;
      }
    if (dup) {
      ++out.dropped_clauses;
      continue;
    }
    cur.clauses.push_back(std::move(*norm.clause));
  }

  if (!is_sat(sat_cnf(cur, cfg))) {
    out.collapsed_unsat = true;
    out.reduced.variables = f.variables;
    out.reduced.clauses = {Clause{{Literal{LinearTerm{}, Rel::Neq}}}};
    return out;
  }

  bool removed = true;
  while (removed) {
    removed = false;
    for (std::size_t ci = 0; ci < cur.clauses.size() && !removed; ++ci) {
      // Removing the only literal leaves an empty clause; cur is satisfiable,
      // so that candidate can never be equivalent.
      if (cur.clauses[ci].size() == 1) continue;
      for (std::size_t li = 0; li < cur.clauses[ci].size() && !removed; ++li) {
        CnfFormula candidate = cur;
        auto& lits = candidate.clauses[ci].literals;
        lits.erase(lits.begin() + static_cast<long>(li));
        if (!equivalent(candidate, cur, cfg)) continue;
        out.removal_log.emplace_back(static_cast<int>(ci), static_cast<int>(li));
        cur = std::move(candidate);
        removed = true;
      }
    }
  }
  out.reduced = std::move(cur);
  return out;
}

enum class Verdict { HornTractable, ZeroTupleTractable, NpHard };

inline std::string_view verdict_line(Verdict v) {
  switch (v) {
    case Verdict::HornTractable: return "HORN";
    case Verdict::ZeroTupleTractable: return "ZERO-TUPLE";
    case Verdict::NpHard: return "NP-HARD";
  }
  return "";
}

struct RelationEvidence {
  std::string name;
  ReducedForm reduction;
  bool horn = false;
  bool nonempty = false;
  bool zero_tuple = false;
};

struct HardnessEvidence {
  std::string violator;      // relation whose reduced form is non-Horn
  std::string zero_avoider;  // non-empty relation without the zero tuple
  GadgetWitness witness;
  std::optional<PpFormula> neq_gadget;  // absent in affine mode when the search fails
  bool neq_primitive = false;           // affine mode: != used as a primitive
  long neq_points = 0;
  long neq_candidates = 0;  // affine search effort
  PpFormula sd_gadget;
  long sd_points = 0;
  bool via_indep2 = false;
};

struct ClassificationReport {
  Verdict verdict = Verdict::HornTractable;
  Mode mode = Mode::Linear;
  bool all_horn = false;
  bool zero_branch = false;  // every non-empty relation contains the zero tuple
  std::vector<RelationEvidence> relations;
  std::optional<HardnessEvidence> hardness;

  std::string to_text() const;
  StructuredDoc to_structured() const;
};

struct ClassifyConfig {
  SemanticsConfig sem;
  SampleSpec verify;
  bool affine_neq_search = true;
};

/*
 * Trichotomy classification of a finite language. Horn is checked before the
 * zero-tuple branch, mirroring the theorem's order; a language may satisfy
 * both, in which case the report flags both and the verdict is HORN. In the
 * NP-hard case the report carries verified gadget certificates: disequality
 * from a zero-tuple-avoiding relation and S_D from a non-Horn reduced one.
 */
inline ClassificationReport classify(const Language& lang, const ClassifyConfig& cfg = {}) {
  for (const Relation& r : lang.relations) {
    if (r.definition.arity() != r.arity)
      throw std::invalid_argument("relation " + r.name + ": arity mismatch");
    if (lang.mode == Mode::Linear && !formula_is_constant_free(r.definition))
      throw std::invalid_argument("relation " + r.name +
                                  " uses nonzero constants, outside the linear language");
    if (lang.mode == Mode::Affine && !formula_is_affine(r.definition))
      throw std::invalid_argument("relation " + r.name + " is not affine-invariant");
  }

  ClassificationReport rep;
  rep.mode = lang.mode;
  rep.all_horn = true;
  rep.zero_branch = true;
  for (const Relation& r : lang.relations) {
    RelationEvidence ev;
    ev.name = r.name;
    ev.reduction = reduce_formula(r.definition, cfg.sem);
    ev.horn = is_horn(ev.reduction.reduced);
    ev.nonempty = is_sat(sat_cnf(r.definition, cfg.sem));
    ev.zero_tuple = contains_zero_tuple(r);
    rep.all_horn = rep.all_horn && ev.horn;
    if (ev.nonempty && !ev.zero_tuple) rep.zero_branch = false;
    rep.relations.push_back(std::move(ev));
  }

  if (rep.all_horn) {
    rep.verdict = Verdict::HornTractable;
    return rep;
  }
  if (rep.zero_branch) {
    rep.verdict = Verdict::ZeroTupleTractable;
    return rep;
  }

  rep.verdict = Verdict::NpHard;
  HardnessEvidence hard;
  const Relation* violator = nullptr;
  const ReducedForm* violator_reduction = nullptr;
  const Relation* avoider = nullptr;
  for (std::size_t i = 0; i < lang.relations.size(); ++i) {
    const auto& ev = rep.relations[i];
    if (!violator && !ev.horn) {
      violator = &lang.relations[i];
      violator_reduction = &ev.reduction;
    }
    if (!avoider && ev.nonempty && !ev.zero_tuple) avoider = &lang.relations[i];
  }
  hard.violator = violator->name;
  hard.zero_avoider = avoider->name;

  Relation neq_target = fixtures::neq_relation();
  Relation sd_target = fixtures::sd_relation();
  if (lang.mode == Mode::Linear) {
    NeqGadget ng = neq_gadget(*avoider, cfg.sem);
    VerifyResult vr = verify_gadget(ng.formula, neq_target, lang, cfg.verify, cfg.sem);
    if (!is_verified(vr)) throw std::logic_error("classify: disequality gadget refuted");
    hard.neq_gadget = std::move(ng.formula);
    hard.neq_points = std::get<Verified>(vr).points_checked;

    SqGadget sq = sq_gadget(*violator, violator_reduction->reduced, cfg.sem);
    VerifyResult sv = verify_gadget(sq.formula, sd_target, lang, cfg.verify, cfg.sem);
    if (!is_verified(sv)) throw std::logic_error("classify: S_D gadget refuted");
    hard.sd_gadget = std::move(sq.formula);
    hard.sd_points = std::get<Verified>(sv).points_checked;
    hard.witness = std::move(sq.witness);
  } else {
    // The paper's affine route to != is nonconstructive (2-transitivity);
    // != stays a primitive of the gadget language unless the bounded
    // pp-search finds a definition.
    hard.neq_primitive = true;
    if (cfg.affine_neq_search) {
      NeqSearchResult found = search_neq_pp(lang, cfg.verify, cfg.sem);
      hard.neq_candidates = found.candidates_tried;
      if (found.formula) {
        VerifyResult vr = verify_gadget(*found.formula, neq_target, lang, cfg.verify, cfg.sem);
        if (is_verified(vr)) {
          hard.neq_gadget = std::move(*found.formula);
          hard.neq_points = std::get<Verified>(vr).points_checked;
          hard.neq_primitive = false;
        }
      }
    }
    AffineSdGadget sd = affine_sd_gadget(*violator, violator_reduction->reduced, cfg.sem);
    VerifyResult sv = verify_gadget(sd.formula, sd_target, lang, cfg.verify, cfg.sem);
    if (!is_verified(sv)) throw std::logic_error("classify: affine S_D gadget refuted");
    hard.sd_gadget = std::move(sd.formula);
    hard.sd_points = std::get<Verified>(sv).points_checked;
    hard.witness = std::move(sd.witness);
    hard.via_indep2 = sd.via_indep2;
  }
  rep.hardness = std::move(hard);
  return rep;
}

namespace detail {

inline std::string tuple_to_string(const std::vector<Rational>& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ' ';
    s += t[i].to_string();
  }
  return s;
}

}  // namespace detail

inline std::string ClassificationReport::to_text() const {
  std::string s;
  s += "verdict: ";
  s += verdict_line(verdict);
  s += "\nmode: ";
  s += mode_name(mode);
  s += "\nall relations Horn after reduction: ";
  s += all_horn ? "yes" : "no";
  s += "\nevery non-empty relation contains the zero tuple: ";
  s += zero_branch ? "yes" : "no";
  s += '\n';
  for (const auto& ev : relations) {
    s += "relation " + ev.name + ":\n";
    s += "  reduced: " + print_formula(ev.reduction.reduced) + '\n';
    if (ev.reduction.collapsed_unsat) s += "  note: definition is unsatisfiable\n";
    s += "  removals: " + std::to_string(ev.reduction.removal_log.size()) +
         ", dropped clauses: " + std::to_string(ev.reduction.dropped_clauses) + '\n';
    s += std::string("  horn: ") + (ev.horn ? "yes" : "no") +
         ", nonempty: " + (ev.nonempty ? "yes" : "no") +
         ", zero-tuple: " + (ev.zero_tuple ? "yes" : "no") + '\n';
  }
  if (hardness) {
    const auto& h = *hardness;
    s += "hardness evidence:\n";
    s += "  non-Horn relation: " + h.violator + " (clause " + std::to_string(h.witness.clause_index) +
         ", positive literals " + std::to_string(h.witness.lit1) + " and " +
         std::to_string(h.witness.lit2) + ")\n";
    s += "  p: (" + detail::tuple_to_string(h.witness.p) + ")\n";
    s += "  q: (" + detail::tuple_to_string(h.witness.q) + ")\n";
    s += "  zero-avoiding relation: " + h.zero_avoider + '\n';
    if (h.neq_gadget) {
      s += "  neq gadget: " + print_pp(*h.neq_gadget) + '\n';
      s += "  neq verified points: " + std::to_string(h.neq_points) + '\n';
    }
    if (h.neq_primitive)
      s += "  neq: kept primitive (no pp-definition found within bound, " +
           std::to_string(h.neq_candidates) + " candidates)\n";
    s += "  sd gadget: " + print_pp(h.sd_gadget) + '\n';
    s += "  sd verified points: " + std::to_string(h.sd_points) + '\n';
  }
  return s;
}

inline StructuredDoc ClassificationReport::to_structured() const {
  StructuredDoc d;
  auto flag = [](bool b) { return b ? "1" : "0"; };
  d.emplace_back("verdict", std::string(verdict_line(verdict)));
  d.emplace_back("mode", std::string(mode_name(mode)));
  d.emplace_back("all_horn", flag(all_horn));
  d.emplace_back("zero_branch", flag(zero_branch));
  d.emplace_back("relations", std::to_string(relations.size()));
  for (std::size_t i = 0; i < relations.size(); ++i) {
    const auto& ev = relations[i];
    std::string p = "relation." + std::to_string(i) + '.';
    d.emplace_back(p + "name", ev.name);
    d.emplace_back(p + "reduced", print_formula(ev.reduction.reduced));
    d.emplace_back(p + "removals", std::to_string(ev.reduction.removal_log.size()));
    d.emplace_back(p + "collapsed_unsat", flag(ev.reduction.collapsed_unsat));
    d.emplace_back(p + "horn", flag(ev.horn));
    d.emplace_back(p + "nonempty", flag(ev.nonempty));
    d.emplace_back(p + "zero_tuple", flag(ev.zero_tuple));
  }
  if (hardness) {
    const auto& h = *hardness;
    d.emplace_back("hardness.violator", h.violator);
    d.emplace_back("hardness.clause", std::to_string(h.witness.clause_index));
    d.emplace_back("hardness.lit1", std::to_string(h.witness.lit1));
    d.emplace_back("hardness.lit2", std::to_string(h.witness.lit2));
    d.emplace_back("hardness.p", detail::tuple_to_string(h.witness.p));
    d.emplace_back("hardness.q", detail::tuple_to_string(h.witness.q));
    d.emplace_back("hardness.zero_avoider", h.zero_avoider);
    d.emplace_back("hardness.neq_primitive", flag(h.neq_primitive));
    if (h.neq_gadget) {
      d.emplace_back("hardness.neq_gadget", print_pp(*h.neq_gadget));
      d.emplace_back("hardness.neq_points", std::to_string(h.neq_points));
    }
    d.emplace_back("hardness.sd_gadget", print_pp(h.sd_gadget));
    d.emplace_back("hardness.sd_points", std::to_string(h.sd_points));
  }
  return d;
}

}  // namespace csplin
