#pragma once

#include "csplin/ast.hpp"
#include "csplin/gauss.hpp"
#include "csplin/horn.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace csplin {

struct BudgetExceeded : std::runtime_error {
  BudgetExceeded() : std::runtime_error("branch budget exceeded") {}
};

struct SemanticsConfig {
  std::uint64_t branch_budget = 1'000'000;
};

/// Conjunction of equalities and disequalities, both against zero.
struct ConjSystem {
  std::vector<LinearTerm> equalities;
  std::vector<LinearTerm> disequalities;
};

struct ConjSat {
  Assignment witness;
};
struct ConjUnsat {
  enum class Cause { InconsistentEqualities, ForcedZeroDisequality };
  Cause cause;
  int index;  // offending equality / disequality
};
using ConjResult = std::variant<ConjSat, ConjUnsat>;

inline bool is_sat(const ConjResult& r) { return std::holds_alternative<ConjSat>(r); }

/// Unsatisfiable iff the equalities are inconsistent or some disequality is
/// entailed zero; the two causes are distinguished in the result. Sat comes
/// with a verified power witness.
inline ConjResult sat_conj(const ConjSystem& c, int num_vars) {
  TriangularSystem sys;
  for (std::size_t i = 0; i < c.equalities.size(); ++i)
    if (sys.add_equation(c.equalities[i]) == TriangularSystem::AddOutcome::Inconsistent)
      return ConjUnsat{ConjUnsat::Cause::InconsistentEqualities, static_cast<int>(i)};
  std::vector<LinearTerm> residual;
  residual.reserve(c.disequalities.size());
  for (std::size_t i = 0; i < c.disequalities.size(); ++i) {
    LinearTerm r = sys.reduce_term(c.disequalities[i]);
    if (r.is_zero())
      return ConjUnsat{ConjUnsat::Cause::ForcedZeroDisequality, static_cast<int>(i)};
    residual.push_back(std::move(r));
  }
  return ConjSat{build_witness(sys, residual, num_vars)};
}

struct CnfSat {
  Assignment witness;
};
struct CnfUnsat {};
using CnfResult = std::variant<CnfSat, CnfUnsat>;

inline bool is_sat(const CnfResult& r) { return std::holds_alternative<CnfSat>(r); }

namespace detail {

/*
 * Complete search: one literal per clause, left to right, clauses in input
 * order; the first witness found is the lexicographically least branch's.
 * The equality system is threaded down the recursion and copied only at Eq
 * branches; disequality conflicts are pruned when already entailed and
 * settled exactly at the leaves.
 */
class CnfSearch {
 public:
  CnfSearch(const CnfFormula& f, std::uint64_t budget) : f_(f), budget_(budget) {}

  CnfResult run() {
    TriangularSystem sys;
    return descend(sys, 0);
  }

 private:
  CnfResult descend(const TriangularSystem& sys, std::size_t idx) {
    if (++used_ > budget_) throw BudgetExceeded{};
    if (idx == f_.clauses.size()) return leaf(sys);
    for (const Literal& l : f_.clauses[idx].literals) {
      if (l.is_eq()) {
        TriangularSystem next = sys;
        if (next.add_equation(l.term) == TriangularSystem::AddOutcome::Inconsistent) continue;
        CnfResult r = descend(next, idx + 1);
        if (is_sat(r)) return r;
      } else {
        if (sys.entails(l.term)) continue;  // entailment only grows down a branch
        diseqs_.push_back(&l.term);
        CnfResult r = descend(sys, idx + 1);
        diseqs_.pop_back();
        if (is_sat(r)) return r;
      }
    }
    return CnfUnsat{};
  }

  CnfResult leaf(const TriangularSystem& sys) {
    std::vector<LinearTerm> residual;
    residual.reserve(diseqs_.size());
    for (const LinearTerm* t : diseqs_) {
      LinearTerm r = sys.reduce_term(*t);
      if (r.is_zero()) return CnfUnsat{};
      residual.push_back(std::move(r));
    }
    return CnfSat{build_witness(sys, residual, f_.arity())};
  }

  const CnfFormula& f_;
  std::uint64_t budget_;
  std::uint64_t used_ = 0;
  std::vector<const LinearTerm*> diseqs_;
};

}  // namespace detail

/// Exact satisfiability for arbitrary CNF by clause splitting; exponential,
/// intended as the desk-scale ground truth.
inline CnfResult sat_cnf(const CnfFormula& f, const SemanticsConfig& cfg = {}) {
  return detail::CnfSearch(f, cfg.branch_budget).run();
}

/// f and g define the same subset of Q^k. Negation is expanded clause by
/// clause: f & !g is satisfiable iff f plus the negation of some clause of g
/// is, which keeps every query in CNF.
inline bool equivalent(const CnfFormula& f, const CnfFormula& g, const SemanticsConfig& cfg = {}) {
  if (f.arity() != g.arity())
    throw std::invalid_argument("equivalent: formulas have different free variables");
  auto refutes = [&cfg](const CnfFormula& a, const CnfFormula& b) {
    for (const Clause& c : b.clauses) {
      CnfFormula query = a;
      for (const Literal& l : c.literals) query.clauses.push_back(Clause{{negate(l)}});
      if (is_sat(sat_cnf(query, cfg))) return true;
    }
    return false;
  };
  return !refutes(f, g) && !refutes(g, f);
}

/// Membership of the all-zero tuple. In affine mode every constant tuple
/// (c,...,c) gives the same answer by translation invariance.
inline bool contains_zero_tuple(const Relation& r) {
  return r.definition.evaluate(zero_assignment(r.arity));
}

struct SampleResult {
  bool found = false;
  Assignment witness;
  int trial = -1;
};

/// Randomized satisfiability probe: rational assignments drawn from a slowly
/// growing integer box. Never claims unsatisfiability.
inline SampleResult sample_oracle(const CnfFormula& f, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("sample_oracle: trials must be >= 1");
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    long long box = 2 + t / 8;
    long long den_box = 1 + std::min<long long>(t / 16, 9);
    std::uniform_int_distribution<long long> num_dist(-box, box);
    std::uniform_int_distribution<long long> den_dist(1, den_box);
    Assignment a;
    for (const auto& v : f.variables) a[v.index] = Rational(BigInt(num_dist(rng)), BigInt(den_dist(rng)));
    if (f.evaluate(a)) return {true, std::move(a), t};
  }
  return {};
}

}  // namespace csplin
