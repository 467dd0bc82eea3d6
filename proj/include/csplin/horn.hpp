#pragma once

#include "csplin/ast.hpp"
#include "csplin/gauss.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace csplin {

/// A CNF formula whose clauses all carry at most one positive (Eq) literal.
class HornInstance {
 public:
  explicit HornInstance(CnfFormula f) : formula_(std::move(f)) {
    for (std::size_t i = 0; i < formula_.clauses.size(); ++i)
      if (formula_.clauses[i].count_eq() > 1)
        throw std::invalid_argument("clause " + std::to_string(i) +
                                    " has more than one positive literal (not Horn)");
  }

  const CnfFormula& formula() const { return formula_; }

 private:
  CnfFormula formula_;
};

struct TraceEvent {
  enum class Kind { UnitPromoted, LiteralDeleted, ClauseSatisfied, EmptyClause, UnitConflict };
  Kind kind;
  int clause = -1;
  int literal = -1;
};

struct SolveStats {
  int passes = 0;
  int deletions = 0;
  int promotions = 0;
  std::size_t input_bits = 0;
  std::size_t peak_row_bits = 0;
};

struct SatResult {
  Assignment witness;
  Rational witness_base;  // the S of the power witness
  std::vector<TraceEvent> trace;
  SolveStats stats;
};

struct UnsatResult {
  std::vector<TraceEvent> trace;
  SolveStats stats;
};

using SolveResult = std::variant<SatResult, UnsatResult>;

inline bool is_sat(const SolveResult& r) { return std::holds_alternative<SatResult>(r); }

/// One plus the maximal sum of absolute coefficient values (constant
/// included) over the residual disequalities, floored at 2. Residuals are
/// gcd-shortened first: the dominance argument needs every coefficient to be
/// an integer so the leading one has absolute value at least 1.
inline Rational compute_s(const std::vector<LinearTerm>& residual_diseqs) {
  Rational best(2);
  for (const auto& raw : residual_diseqs) {
    LinearTerm t = TriangularSystem::shorten(raw);
    Rational sum(1);
    for (const auto& [v, c] : t.coeffs()) sum += c.abs();
    sum += t.constant().abs();
    if (sum > best) best = sum;
  }
  return best;
}

/*
 * Power witness: the i-th free variable (by ordinal) gets S^i, pivot
 * variables are back-substituted from the triangular system. Every residual
 * disequality then has its highest free variable dominating the rest of the
 * term in absolute value, so it evaluates nonzero.
 *
 * Precondition: the residual terms are reduced by `units` and none is the
 * zero term; a failed post-check signals an internal bug, not bad input.
 */
inline Assignment build_witness(const TriangularSystem& units,
                                const std::vector<LinearTerm>& residual_diseqs, int num_vars) {
  for (const auto& t : residual_diseqs)
    if (t.is_zero())
      throw std::invalid_argument("build_witness: residual disequality is identically zero");
  // compute_s shortens internally, so S exceeds each shortened coefficient
  // sum; scaling a disequality does not change where it vanishes.
  Rational base = compute_s(residual_diseqs);
  Assignment a;
  Rational power(1);
  for (int v = 1; v <= num_vars; ++v) {
    if (units.is_pivot(v)) continue;
    power *= base;
    a[v] = power;
  }
  for (const auto& row : units.rows()) {
    int pivot = row.leading_var();
    Rational acc = row.constant();
    for (const auto& [v, c] : row.coeffs())
      if (v != pivot) acc += c * a.at(v);
    a[pivot] = -(acc / row.leading_coeff());
  }
  for (const auto& t : residual_diseqs)
    if (t.evaluate(a).is_zero()) throw std::logic_error("build_witness: residual not satisfied");
  return a;
}

namespace detail {

/// Applies rows [upto, rank) to t in index order. Row contents may have been
/// back-eliminated since t last caught up; the later rows repair exactly the
/// pivots that could have been introduced, so the result is the unique
/// pivot-free representative of t's coset.
inline void catch_up(LinearTerm& t, std::size_t& upto, const TriangularSystem& sys) {
  const auto& rows = sys.rows();
  for (; upto < rows.size(); ++upto) {
    const LinearTerm& row = rows[upto];
    Rational c = t.coeff(row.leading_var());
    if (!c.is_zero()) t.add_scaled(row, -(c / row.leading_coeff()));
  }
}

}  // namespace detail

/*
 * Decision procedure for Horn instances: promote single-positive clauses
 * into the unit system, delete negative literals whose equality is entailed,
 * and loop until a pass changes nothing. Unsatisfiability surfaces as an
 * empty clause (or a unit conflict, possible only with constant terms).
 * Clauses and literals are scanned in input order so traces are reproducible.
 */
inline SolveResult solve(const HornInstance& inst) {
  const CnfFormula& f = inst.formula();
  TriangularSystem units;
  std::vector<TraceEvent> trace;
  SolveStats stats;
  stats.input_bits = f.bit_size();

  struct LitState {
    LinearTerm residual;
    std::size_t upto = 0;
    bool deleted = false;
  };
  struct ClauseState {
    std::vector<LitState> lits;
    int remaining = 0;
    bool closed = false;  // promoted into units or satisfied outright
  };
  std::vector<ClauseState> cs(f.clauses.size());
  for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
    cs[ci].remaining = static_cast<int>(f.clauses[ci].size());
    for (const auto& l : f.clauses[ci].literals) cs[ci].lits.push_back({l.term, 0, false});
  }

  auto finish_unsat = [&]() {
    stats.peak_row_bits = units.peak_row_bits();
    return SolveResult(UnsatResult{std::move(trace), stats});
  };

  // Returns false when the promotion exposes a unit conflict.
  auto promote = [&](std::size_t ci, int li) -> bool {
    auto& lit = cs[ci].lits[li];
    detail::catch_up(lit.residual, lit.upto, units);
    switch (units.add_equation(lit.residual)) {
      case TriangularSystem::AddOutcome::Added:
        trace.push_back({TraceEvent::Kind::UnitPromoted, static_cast<int>(ci), li});
        ++stats.promotions;
        break;
      case TriangularSystem::AddOutcome::Redundant:
        trace.push_back({TraceEvent::Kind::ClauseSatisfied, static_cast<int>(ci), li});
        break;
      case TriangularSystem::AddOutcome::Inconsistent:
        trace.push_back({TraceEvent::Kind::UnitConflict, static_cast<int>(ci), li});
        return false;
    }
    cs[ci].closed = true;
    return true;
  };

  // Initial units: clauses that are a single positive literal.
  for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
    const Clause& clause = f.clauses[ci];
    if (clause.empty()) {
      trace.push_back({TraceEvent::Kind::EmptyClause, static_cast<int>(ci), -1});
      return finish_unsat();
    }
    if (clause.size() == 1 && clause.literals[0].is_eq())
      if (!promote(ci, 0)) return finish_unsat();
  }

  bool changed = true;
  while (changed) {
    changed = false;
    ++stats.passes;
    for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
      if (cs[ci].closed) continue;
      const Clause& clause = f.clauses[ci];
      for (int li = 0; li < static_cast<int>(clause.size()); ++li) {
        auto& lit = cs[ci].lits[li];
        if (lit.deleted) continue;
        detail::catch_up(lit.residual, lit.upto, units);
        if (!lit.residual.is_zero()) continue;
        if (clause.literals[li].is_eq()) {
          // Entailed positive literal: the clause is already satisfied.
          trace.push_back({TraceEvent::Kind::ClauseSatisfied, static_cast<int>(ci), li});
          cs[ci].closed = true;
          changed = true;
          break;
        }
        lit.deleted = true;
        --cs[ci].remaining;
        ++stats.deletions;
        trace.push_back({TraceEvent::Kind::LiteralDeleted, static_cast<int>(ci), li});
        changed = true;
        if (cs[ci].remaining == 0) {
          trace.push_back({TraceEvent::Kind::EmptyClause, static_cast<int>(ci), -1});
          return finish_unsat();
        }
      }
    }
    for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
      if (cs[ci].closed || cs[ci].remaining != 1) continue;
      int li = -1;
      for (int k = 0; k < static_cast<int>(cs[ci].lits.size()); ++k)
        if (!cs[ci].lits[k].deleted) li = k;
      if (!f.clauses[ci].literals[li].is_eq()) continue;
      if (!promote(ci, li)) return finish_unsat();
      changed = true;
    }
  }

  std::vector<LinearTerm> residual;
  for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
    if (cs[ci].closed) continue;
    for (std::size_t li = 0; li < cs[ci].lits.size(); ++li) {
      auto& lit = cs[ci].lits[li];
      if (lit.deleted || f.clauses[ci].literals[li].is_eq()) continue;
      detail::catch_up(lit.residual, lit.upto, units);
      residual.push_back(lit.residual);
    }
  }

  Rational base = compute_s(residual);
  Assignment witness = build_witness(units, residual, f.arity());
  if (!f.evaluate(witness)) throw std::logic_error("solve: witness failed final evaluation");
  stats.peak_row_bits = units.peak_row_bits();
  return SatResult{std::move(witness), std::move(base), std::move(trace), stats};
}

/*
 * Independent replay of a solve trace against the original formula: units
 * are rebuilt from the promotions in order, every deletion's entailment is
 * re-checked at its point in the run, and an unsatisfiable run must end in
 * an empty clause or a unit conflict.
 */
inline bool replay_trace(const CnfFormula& f, const std::vector<TraceEvent>& trace,
                         bool expect_unsat) {
  TriangularSystem units;
  std::vector<std::vector<bool>> deleted(f.clauses.size());
  for (std::size_t ci = 0; ci < f.clauses.size(); ++ci)
    deleted[ci].assign(f.clauses[ci].size(), false);
  bool closed_unsat = false;
  for (const auto& ev : trace) {
    if (ev.clause < 0 || ev.clause >= static_cast<int>(f.clauses.size())) return false;
    const Clause& clause = f.clauses[ev.clause];
    auto lit_ok = [&]() { return ev.literal >= 0 && ev.literal < static_cast<int>(clause.size()); };
    switch (ev.kind) {
      case TraceEvent::Kind::UnitPromoted:
        if (!lit_ok() || !clause.literals[ev.literal].is_eq()) return false;
        if (units.add_equation(clause.literals[ev.literal].term) !=
            TriangularSystem::AddOutcome::Added)
          return false;
        break;
      case TraceEvent::Kind::LiteralDeleted:
        if (!lit_ok() || clause.literals[ev.literal].is_eq()) return false;
        if (deleted[ev.clause][ev.literal]) return false;
        if (!units.entails(clause.literals[ev.literal].term)) return false;
        deleted[ev.clause][ev.literal] = true;
        break;
      case TraceEvent::Kind::ClauseSatisfied:
        if (!lit_ok() || !clause.literals[ev.literal].is_eq()) return false;
        if (!units.entails(clause.literals[ev.literal].term)) return false;
        break;
      case TraceEvent::Kind::EmptyClause: {
        bool all_deleted = true;
        for (bool d : deleted[ev.clause]) all_deleted = all_deleted && d;
        if (!all_deleted) return false;
        closed_unsat = true;
        break;
      }
      case TraceEvent::Kind::UnitConflict:
        if (!lit_ok() || !clause.literals[ev.literal].is_eq()) return false;
        if (units.add_equation(clause.literals[ev.literal].term) !=
            TriangularSystem::AddOutcome::Inconsistent)
          return false;
        closed_unsat = true;
        break;
    }
  }
  return expect_unsat == closed_unsat;
}

}  // namespace csplin
