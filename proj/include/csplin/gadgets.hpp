#pragma once

#include "csplin/ast.hpp"
#include "csplin/fixtures.hpp"
#include "csplin/pp.hpp"
#include "csplin/semantics.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace csplin {

// ---------------------------------------------------------------------------
// Verification

struct SampleSpec {
  int grid_radius = 2;     // integer grid {-r..r}^arity
  int random_points = 200; // extra random rational points
  int max_numerator = 10;
  int max_denominator = 10;
  std::uint64_t seed = 0;
};

struct Verified {
  long points_checked = 0;
};
struct Refuted {
  std::vector<Rational> point;
  bool in_target = false;  // true: point is in the target but the gadget misses it
};
using VerifyResult = std::variant<Verified, Refuted>;

inline bool is_verified(const VerifyResult& r) { return std::holds_alternative<Verified>(r); }

/*
 * Semantic check of a pp-formula against a target relation: for every sample
 * point, membership in the target (by direct evaluation) must coincide with
 * satisfiability of the gadget's expansion with the free variables pinned.
 * Samples cover the full integer grid plus seeded random rationals.
 */
inline VerifyResult verify_gadget(const PpFormula& g, const Relation& target, const Language& lang,
                                  const SampleSpec& spec = {}, const SemanticsConfig& cfg = {}) {
  if (g.arity() != target.arity)
    throw std::invalid_argument("verify_gadget: free arity does not match target arity");
  CnfFormula expansion = pp_expand(g, lang);
  long checked = 0;
  auto agree = [&](const std::vector<Rational>& point) -> std::optional<Refuted> {
    Assignment free_assign;
    for (int i = 0; i < target.arity; ++i) free_assign[i + 1] = point[i];
    bool in_target = target.definition.evaluate(free_assign);
    // Pins go first so the search prunes before touching any disjunction.
    CnfFormula query;
    query.variables = expansion.variables;
    for (int i = 0; i < g.arity(); ++i) {
      LinearTerm pin = LinearTerm::variable(i + 1);
      pin.add_constant(-point[i]);
      query.clauses.push_back(Clause{{Literal{std::move(pin), Rel::Eq}}});
    }
    query.clauses.insert(query.clauses.end(), expansion.clauses.begin(), expansion.clauses.end());
    bool holds = is_sat(sat_cnf(query, cfg));
    ++checked;
    if (holds == in_target) return std::nullopt;
    return Refuted{point, in_target};
  };

  const int arity = target.arity;
  std::vector<Rational> point(arity, Rational(0));
  std::vector<int> idx(arity, -spec.grid_radius);
  bool done = arity == 0;
  while (!done) {
    for (int i = 0; i < arity; ++i) point[i] = Rational(idx[i]);
    if (auto bad = agree(point)) return *bad;
    int i = 0;
    for (; i < arity; ++i) {
      if (idx[i] < spec.grid_radius) {
        ++idx[i];
        break;
      }
      idx[i] = -spec.grid_radius;
    }
    done = i == arity;
  }
  if (arity == 0) {
    if (auto bad = agree(point)) return *bad;
  }

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> num(-spec.max_numerator, spec.max_numerator);
  std::uniform_int_distribution<int> den(1, spec.max_denominator);
  for (int t = 0; t < spec.random_points; ++t) {
    for (int i = 0; i < arity; ++i) point[i] = Rational(BigInt(num(rng)), BigInt(den(rng)));
    if (auto bad = agree(point)) return *bad;
  }
  return Verified{checked};
}

// ---------------------------------------------------------------------------
// Emission helpers

namespace detail {

/// Accumulates atoms of a pp-formula under construction and owns the chain
/// compilations from linear/affine equalities down to the atom vocabulary.
class PpBuilder {
 public:
  explicit PpBuilder(std::vector<std::string> free_names) {
    g_.free_vars = std::move(free_names);
  }

  PpFormula take() && { return std::move(g_); }

  int fresh() {
    g_.bound_vars.push_back("e" + std::to_string(g_.bound_vars.size() + 1));
    return g_.var_count() - 1;
  }

  void sum(int a, int b, int c) { atom({PpAtom::Kind::Sum, {}, {a, b, c}}); }
  void fatom(int a, int b, int c, int d) { atom({PpAtom::Kind::FAtom, {}, {a, b, c, d}}); }
  void neq(int a, int b) { atom({PpAtom::Kind::Neq, {}, {a, b}}); }
  void zero(int a) { atom({PpAtom::Kind::Zero, {}, {a}}); }
  void rel(std::string name, std::vector<int> args) {
    atom({PpAtom::Kind::Rel, std::move(name), std::move(args)});
  }

  /// A shared variable pinned to 0.
  int zero_var() {
    if (zero_var_ < 0) {
      zero_var_ = fresh();
      zero(zero_var_);
    }
    return zero_var_;
  }

  // ----- linear mode -----

  /// Asserts sum of coeff*var = 0 over {sum, zero} via multiple-chains: each
  /// variable is duplicated up to its integer coefficient, then the positive
  /// and negative sides are folded together.
  void linear_zero(const std::vector<std::pair<int, Rational>>& coeffs) {
    auto ints = integer_scale(coeffs);
    std::vector<int> pos, neg;
    for (const auto& [var, c] : ints) {
      int node = chain_multiple(var, boost::multiprecision::abs(c));
      (c > 0 ? pos : neg).push_back(node);
    }
    if (pos.empty() && neg.empty()) return;  // 0 = 0
    if (neg.empty()) {
      zero(fold(pos, std::nullopt));
      return;
    }
    if (pos.empty()) {
      zero(fold(neg, std::nullopt));
      return;
    }
    if (pos.size() == 1 && neg.size() == 1) {
      sum(pos[0], zero_var(), neg[0]);  // pos + 0 = neg
      return;
    }
    if (pos.size() == 1) {
      fold(neg, pos[0]);
      return;
    }
    int target = neg.size() == 1 ? neg[0] : fold(neg, std::nullopt);
    fold(pos, target);
  }

  /// Binds a fresh variable to the value of the (homogeneous) term and
  /// asserts it nonzero.
  void linear_nonzero(const std::vector<std::pair<int, Rational>>& coeffs) {
    if (coeffs.size() == 1) {
      neq(coeffs[0].first, zero_var());
      return;
    }
    int w = fresh();
    auto with_w = coeffs;
    with_w.emplace_back(w, Rational(-1));
    linear_zero(with_w);
    neq(w, zero_var());
  }

  // ----- affine mode -----

  /// Asserts sum of coeff*var = 0 where the coefficients sum to 0, over
  /// {fatom}: rewritten as (term + ref) = ref with ref the first variable,
  /// then compiled as an affine combination with coefficient sum 1.
  void affine_zero(const std::vector<std::pair<int, Rational>>& coeffs) {
    auto ints = integer_scale(coeffs);
    if (ints.empty()) return;
    int ref = ints.front().first;
    add_coeff(ints, ref, 1);
    affine_combination(std::move(ints), ref);
  }

  /// Asserts the affine term nonzero: w = term + ref, then w != ref.
  void affine_nonzero(const std::vector<std::pair<int, Rational>>& coeffs) {
    auto ints = integer_scale(coeffs);
    if (ints.empty()) throw std::invalid_argument("affine_nonzero: term is identically zero");
    int ref = ints.front().first;
    add_coeff(ints, ref, 1);
    int w = fresh();
    affine_combination(std::move(ints), w);
    neq(w, ref);
  }

  /// Asserts out = sum of coeff*var for integer coefficients summing to 1.
  /// Each fatom removes one +1/-1 coefficient pair; the recursion bottoms
  /// out at a single variable.
  void affine_combination(std::vector<std::pair<int, BigInt>> s, int out) {
    while (true) {
      if (s.size() == 1 && s[0].second == 1) {
        if (s[0].first != out) fatom(s[0].first, s[0].first, s[0].first, out);  // v = out
        return;
      }
      int a = -1, b = -1;
      for (const auto& [var, c] : s) {
        if (a < 0 && c >= 1) a = var;
        if (b < 0 && c <= -1) b = var;
      }
      if (a < 0 || b < 0) throw std::logic_error("affine_combination: malformed coefficients");
      std::vector<std::pair<int, BigInt>> rest = s;
      add_coeff(rest, a, -1);
      add_coeff(rest, b, 1);
      if (rest.size() == 1 && rest[0].second == 1) {
        fatom(a, b, rest[0].first, out);  // a - b + v = out
        return;
      }
      int aux = fresh();
      fatom(a, b, aux, out);
      out = aux;
      s = std::move(rest);
    }
  }

 private:
  void atom(PpAtom a) {
    for (const auto& seen : g_.atoms)
      if (seen == a) return;
    g_.atoms.push_back(std::move(a));
  }

  static void add_coeff(std::vector<std::pair<int, BigInt>>& s, int var, BigInt delta) {
    for (auto it = s.begin(); it != s.end(); ++it) {
      if (it->first != var) continue;
      it->second += delta;
      if (it->second.is_zero()) s.erase(it);
      return;
    }
    s.emplace_back(var, std::move(delta));
  }

  /// Clears denominators and divides out the gcd; drops zero coefficients.
  static std::vector<std::pair<int, BigInt>> integer_scale(
      const std::vector<std::pair<int, Rational>>& coeffs) {
    BigInt lcm_den = 1;
    for (const auto& [v, c] : coeffs)
      if (!c.is_zero()) lcm_den = boost::multiprecision::lcm(lcm_den, c.den());
    BigInt g = 0;
    std::vector<std::pair<int, BigInt>> out;
    for (const auto& [v, c] : coeffs) {
      if (c.is_zero()) continue;
      BigInt scaled = c.num() * (lcm_den / c.den());
      g = boost::multiprecision::gcd(g, boost::multiprecision::abs(scaled));
      bool merged = false;
      for (auto& [ov, oc] : out)
        if (ov == v) {
          oc += scaled;
          merged = true;
          break;
        }
      if (!merged) out.emplace_back(v, std::move(scaled));
    }
    std::erase_if(out, [](const auto& p) { return p.second.is_zero(); });
    if (!out.empty() && g > 1)
      for (auto& [v, c] : out) c /= g;
    return out;
  }

  /// Node carrying m copies of var: a chain of m-1 sum atoms.
  int chain_multiple(int var, const BigInt& m) {
    int node = var;
    for (BigInt i = 1; i < m; ++i) {
      int next = fresh();
      sum(var, node, next);
      node = next;
    }
    return node;
  }

  /// Folds nodes into a single sum; with a target, the last atom writes into
  /// it (asserting target = total), otherwise a fresh node is returned.
  int fold(const std::vector<int>& nodes, std::optional<int> target) {
    if (nodes.size() == 1) {
      if (target) sum(nodes[0], zero_var(), *target);
      return target.value_or(nodes[0]);
    }
    int acc = nodes[0];
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
      int next = fresh();
      sum(acc, nodes[i], next);
      acc = next;
    }
    int last = target ? *target : fresh();
    sum(acc, nodes.back(), last);
    return last;
  }

  PpFormula g_;
  int zero_var_ = -1;
};

inline std::vector<std::pair<int, Rational>> term_coeffs(const LinearTerm& t,
                                                         const std::vector<int>& var_map) {
  std::vector<std::pair<int, Rational>> out;
  for (const auto& [v, c] : t.coeffs()) out.emplace_back(var_map[v - 1], c);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hyperplane gadget (linear mode)

/// pp-definition of {x : sum coeffs[i] * x_i = 0} over {x+y=z, zero}.
inline PpFormula hyperplane_gadget(const std::vector<Rational>& coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("hyperplane_gadget: need at least one coefficient");
  std::vector<std::string> frees;
  for (std::size_t i = 1; i <= coeffs.size(); ++i) frees.push_back("x" + std::to_string(i));
  detail::PpBuilder b(std::move(frees));
  std::vector<std::pair<int, Rational>> cs;
  for (std::size_t i = 0; i < coeffs.size(); ++i) cs.emplace_back(static_cast<int>(i), coeffs[i]);
  b.linear_zero(cs);
  return std::move(b).take();
}

// ---------------------------------------------------------------------------
// Disequality gadget (linear mode)

namespace detail {

/// Identifies coordinate j into i (1-based, i < j), renumbering the ordinals
/// above j down by one. Clauses are re-normalized; tautologies are dropped.
inline CnfFormula identify_coords(const CnfFormula& f, int i, int j) {
  CnfFormula out;
  for (int v = 1; v <= f.arity(); ++v) {
    if (v == j) continue;
    out.variables.push_back({f.variables[v - 1].name, v > j ? v - 1 : v});
  }
  auto remap = [i, j](int v) { return v == j ? i : (v > j ? v - 1 : v); };
  for (const Clause& c : f.clauses) {
    std::vector<Literal> lits;
    for (const Literal& l : c.literals) {
      LinearTerm t(l.term.constant());
      for (const auto& [v, coeff] : l.term.coeffs()) t.add_var(remap(v), coeff);
      lits.push_back({std::move(t), l.rel});
    }
    auto norm = normalize_clause(std::move(lits));
    if (norm.clause) out.clauses.push_back(std::move(*norm.clause));
  }
  return out;
}

inline bool sat_with_pins(const CnfFormula& f, const std::vector<std::pair<int, Rational>>& pins,
                          const SemanticsConfig& cfg) {
  CnfFormula q = f;
  for (const auto& [v, val] : pins) {
    LinearTerm t = LinearTerm::variable(v);
    t.add_constant(-val);
    q.clauses.push_back(Clause{{Literal{std::move(t), Rel::Eq}}});
  }
  return is_sat(sat_cnf(q, cfg));
}

inline std::vector<Rational> extract_tuple(const Assignment& a, int arity) {
  std::vector<Rational> out;
  out.reserve(arity);
  for (int v = 1; v <= arity; ++v) out.push_back(a.at(v));
  return out;
}

}  // namespace detail

struct NeqGadget {
  PpFormula formula;  // defines {(x,y) : x != y} over {R, x+y=z, zero}
  int descent_arity = 0;
  bool section_at_first = false;  // true: the T section was nonzero, else U
};

/*
 * Constructive pp-definition of disequality from a non-empty relation that
 * avoids the zero tuple. Appends a zero-pinned coordinate so the diagonal
 * becomes empty, descends by identifying coordinate pairs while this stays
 * satisfiable, classifies the unary sections T(x) = S(x,0,...) and
 * U(y) = S(_,y,...) among {Q, Q minus 0, {0}, empty} by membership tests at
 * 0 and 1, and finishes with exists u,y'. phi(u) & y+y'=0 & x+y'=u.
 */
inline NeqGadget neq_gadget(const Relation& R, const SemanticsConfig& cfg = {}) {
  if (!formula_is_constant_free(R.definition))
    throw std::invalid_argument("neq_gadget: relation definition must be constant-free");
  if (!is_sat(sat_cnf(R.definition, cfg)))
    throw std::invalid_argument("neq_gadget: relation is empty");
  if (contains_zero_tuple(R))
    throw std::invalid_argument("neq_gadget: relation contains the zero tuple");

  CnfFormula s = R.definition;
  s.variables.push_back({"zc", R.arity + 1});
  s.clauses.push_back(Clause{{Literal{LinearTerm::variable(R.arity + 1), Rel::Eq}}});
  std::vector<int> coord(R.arity + 1);  // original R' coordinate -> current coordinate
  for (int i = 0; i <= R.arity; ++i) coord[i] = i + 1;

  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 1; i <= s.arity() && !changed; ++i) {
      for (int j = i + 1; j <= s.arity() && !changed; ++j) {
        CnfFormula q = s;
        LinearTerm t = LinearTerm::variable(i);
        t.add_var(j, Rational(-1));
        q.clauses.push_back(Clause{{Literal{std::move(t), Rel::Eq}}});
        if (!is_sat(sat_cnf(q, cfg))) continue;
        s = detail::identify_coords(s, i, j);
        for (auto& c : coord) c = c == j ? i : (c > j ? c - 1 : c);
        changed = true;
      }
    }
  }
  if (s.arity() < 2) throw std::logic_error("neq_gadget: descent reached arity below 2");

  auto member = [&](int coordinate, int value, bool pin_second_zero) {
    std::vector<std::pair<int, Rational>> pins{{coordinate, Rational(value)}};
    if (pin_second_zero && coordinate != 2) pins.push_back({2, Rational(0)});
    return detail::sat_with_pins(s, pins, cfg);
  };
  if (member(1, 0, true))
    throw std::logic_error("neq_gadget: 0 in section T contradicts the descent fixpoint");
  int distinguished;
  bool pin_second;
  if (member(1, 1, true)) {
    distinguished = 1;  // T = Q \ {0}
    pin_second = true;
  } else {
    // T is empty, so 0 cannot occur in the second coordinate and U = Q \ {0}.
    if (member(2, 0, false)) throw std::logic_error("neq_gadget: section case analysis violated");
    if (!member(2, 1, false)) throw std::logic_error("neq_gadget: section U is not Q \\ {0}");
    distinguished = 2;
    pin_second = false;
  }

  detail::PpBuilder b({"x", "y"});
  int u = b.fresh();
  int yp = b.fresh();
  int zsum = b.fresh();
  b.sum(1, yp, zsum);  // y + y' = 0
  b.zero(zsum);
  b.sum(0, yp, u);  // x + y' = u
  std::vector<int> cvar(s.arity() + 1, -1);
  cvar[distinguished] = u;
  auto coord_var = [&](int c) {
    if (cvar[c] < 0) cvar[c] = b.fresh();
    return cvar[c];
  };
  if (pin_second) b.zero(coord_var(2));
  std::vector<int> args;
  for (int i = 0; i < R.arity; ++i) args.push_back(coord_var(coord[i]));
  b.rel(R.name, std::move(args));
  b.zero(coord_var(coord[R.arity]));
  return {std::move(b).take(), s.arity(), pin_second};
}

// ---------------------------------------------------------------------------
// S_D gadget (linear mode)

struct GadgetWitness {
  std::vector<Rational> p, q;  // p satisfies l1 and no other literal of C; q likewise for l2
  int clause_index = -1;
  int lit1 = -1;
  int lit2 = -1;
};

struct SqGadget {
  PpFormula formula;    // defines S_D over {R, x+y=z, zero, neq}
  PpFormula t_formula;  // the intermediate T = {(x,y) : x != 0 & (y = 0 | x = y)}
  GadgetWitness witness;
};

namespace detail {

inline int find_two_positive_clause(const CnfFormula& f, int& l1, int& l2) {
  for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
    l1 = l2 = -1;
    for (int li = 0; li < static_cast<int>(f.clauses[ci].size()); ++li) {
      if (!f.clauses[ci].literals[li].is_eq()) continue;
      if (l1 < 0)
        l1 = li;
      else if (l2 < 0) {
        l2 = li;
        return static_cast<int>(ci);
      }
    }
  }
  return -1;
}

/// Witness tuple for "in R, satisfies C's literal `keep` and no other
/// literal of C" — guaranteed to exist when the definition is reduced.
/// Small entries are preferred (they become chain coefficients downstream),
/// so a seeded box sampler runs before the complete search.
inline std::vector<Rational> pick_pattern_witness(const CnfFormula& reduced, int ci, int keep,
                                                  const SemanticsConfig& cfg) {
  CnfFormula query = reduced;
  const Clause& c = reduced.clauses[ci];
  query.clauses.push_back(Clause{{c.literals[keep]}});
  for (int li = 0; li < static_cast<int>(c.size()); ++li)
    if (li != keep) query.clauses.push_back(Clause{{negate(c.literals[li])}});
  SampleResult sampled = sample_oracle(query, 400, 0);
  if (sampled.found) return extract_tuple(sampled.witness, reduced.arity());
  CnfResult r = sat_cnf(query, cfg);
  if (!is_sat(r))
    throw std::invalid_argument("witness search failed: definition is not reduced");
  return extract_tuple(std::get<CnfSat>(r).witness, reduced.arity());
}

/// Atoms of T(x,y): x != 0, z_i = p_i x + (q_i - p_i) y, the negations of
/// C's side literals over z, and R(z).
inline void emit_t_body(PpBuilder& b, int x, int y, const Relation& R, const Clause& C, int l1,
                        int l2, const std::vector<Rational>& p, const std::vector<Rational>& q) {
  b.neq(x, b.zero_var());
  std::vector<int> zs;
  for (int i = 0; i < R.arity; ++i) zs.push_back(b.fresh());
  for (int i = 0; i < R.arity; ++i) {
    std::vector<std::pair<int, Rational>> cs{
        {zs[i], Rational(1)}, {x, -p[i]}, {y, -(q[i] - p[i])}};
    b.linear_zero(cs);
  }
  for (int li = 0; li < static_cast<int>(C.size()); ++li) {
    if (li == l1 || li == l2) continue;
    const Literal& l = C.literals[li];
    std::vector<std::pair<int, Rational>> cs;
    for (const auto& [v, c] : l.term.coeffs()) cs.emplace_back(zs[v - 1], c);
    if (l.is_eq())
      b.linear_nonzero(cs);
    else
      b.linear_zero(cs);
  }
  b.rel(R.name, zs);
}

}  // namespace detail

/*
 * pp-definition of S_D from a relation whose reduced definition has a clause
 * C with two positive literals l1, l2: first the line relation
 * T(x,y) = {x != 0 & (y = 0 | x = y)} via tuples p,q in R that satisfy
 * exactly one of l1, l2 within C, then the wrapper
 * exists x,y. x+v=w & y+v=u & T(x,y).
 */
inline SqGadget sq_gadget(const Relation& R, const CnfFormula& reduced,
                          const SemanticsConfig& cfg = {}) {
  if (!formula_is_constant_free(R.definition) || !formula_is_constant_free(reduced))
    throw std::invalid_argument("sq_gadget: relation definition must be constant-free");
  if (reduced.arity() != R.arity) throw std::invalid_argument("sq_gadget: arity mismatch");
  int l1 = -1, l2 = -1;
  int ci = detail::find_two_positive_clause(reduced, l1, l2);
  if (ci < 0) throw std::invalid_argument("sq_gadget: no clause with two positive literals");
  const Clause& C = reduced.clauses[ci];

  std::vector<Rational> p = detail::pick_pattern_witness(reduced, ci, l1, cfg);
  std::vector<Rational> q = detail::pick_pattern_witness(reduced, ci, l2, cfg);
  // Re-validate the pattern the construction relies on.
  auto check_pattern = [&](const std::vector<Rational>& tuple, int keep) {
    Assignment a;
    for (int v = 1; v <= R.arity; ++v) a[v] = tuple[v - 1];
    if (!R.definition.evaluate(a)) throw std::logic_error("sq_gadget: witness not in R");
    for (int li = 0; li < static_cast<int>(C.size()); ++li)
      if (C.literals[li].evaluate(a) != (li == keep))
        throw std::logic_error("sq_gadget: witness literal pattern violated");
  };
  check_pattern(p, l1);
  check_pattern(q, l2);

  detail::PpBuilder tb({"x", "y"});
  detail::emit_t_body(tb, 0, 1, R, C, l1, l2, p, q);

  detail::PpBuilder sb({"x", "y", "z"});
  int xi = sb.fresh();
  int yi = sb.fresh();
  sb.sum(xi, 1, 2);  // x + v = w
  sb.sum(yi, 1, 0);  // y + v = u
  detail::emit_t_body(sb, xi, yi, R, C, l1, l2, p, q);

  return {std::move(sb).take(), std::move(tb).take(),
          GadgetWitness{std::move(p), std::move(q), ci, l1, l2}};
}

// ---------------------------------------------------------------------------
// S_D gadget (affine mode)

struct AffineSdGadget {
  PpFormula formula;  // defines S_D over {R, fatom, neq}
  GadgetWitness witness;
  bool via_indep2 = false;
};

/*
 * Affine route to S_D: for clause C's positive literals t1 = 0 and t2 = 0,
 * isolate variables x_i4, x_j4 and extend the relation by two coordinates
 * pinned to the isolated affine combinations, so that t1 holds iff
 * x_i4 = x_{n+1} and t2 iff x_j4 = x_{n+2}. The three (un)satisfiability
 * conditions of the independence lemmas are checked exactly; the gadget is
 * the indep1 projection, composed through the 4-ary detour when i4 != j4.
 * The result is verified against S_D before being returned.
 */
inline AffineSdGadget affine_sd_gadget(const Relation& R, const CnfFormula& reduced,
                                       const SemanticsConfig& cfg = {}) {
  if (!formula_is_affine(R.definition) || !formula_is_affine(reduced))
    throw std::invalid_argument("affine_sd_gadget: relation is not affine-invariant");
  if (reduced.arity() != R.arity) throw std::invalid_argument("affine_sd_gadget: arity mismatch");
  int l1 = -1, l2 = -1;
  int ci = detail::find_two_positive_clause(reduced, l1, l2);
  if (ci < 0) throw std::invalid_argument("affine_sd_gadget: no clause with two positive literals");
  const Clause& C = reduced.clauses[ci];
  const LinearTerm& t1 = C.literals[l1].term;
  const LinearTerm& t2 = C.literals[l2].term;
  const int n = reduced.arity();
  const int i4 = t1.leading_var();
  const int j4 = t2.leading_var();
  // x_i4 = g1 is equivalent to t1 = 0; g1 has coefficient sum 1.
  LinearTerm g1 = LinearTerm::variable(i4) - t1.scaled(Rational(1) / t1.coeff(i4));
  LinearTerm g2 = LinearTerm::variable(j4) - t2.scaled(Rational(1) / t2.coeff(j4));

  CnfFormula Q = reduced;
  Q.variables.push_back({"w1", n + 1});
  Q.variables.push_back({"w2", n + 2});
  for (int li = 0; li < static_cast<int>(C.size()); ++li)
    if (li != l1 && li != l2) Q.clauses.push_back(Clause{{negate(C.literals[li])}});
  LinearTerm d1 = LinearTerm::variable(n + 1) - g1;
  LinearTerm d2 = LinearTerm::variable(n + 2) - g2;
  Q.clauses.push_back(Clause{{normalize({std::move(d1), Rel::Eq})}});
  Q.clauses.push_back(Clause{{normalize({std::move(d2), Rel::Eq})}});

  auto query = [&](bool neq1, bool neq2) {
    CnfFormula f = Q;
    if (neq1) {
      LinearTerm t = LinearTerm::variable(i4);
      t.add_var(n + 1, Rational(-1));
      f.clauses.push_back(Clause{{normalize({std::move(t), Rel::Neq})}});
    }
    if (neq2) {
      LinearTerm t = LinearTerm::variable(j4);
      t.add_var(n + 2, Rational(-1));
      f.clauses.push_back(Clause{{normalize({std::move(t), Rel::Neq})}});
    }
    return sat_cnf(f, cfg);
  };
  CnfResult cond1 = query(true, false);
  CnfResult cond2 = query(false, true);
  if (!is_sat(cond1) || !is_sat(cond2) || is_sat(query(true, true)))
    throw std::invalid_argument(
        "affine_sd_gadget: independence conditions fail; input is not genuinely non-Horn-reduced");
  // The condition-1 witness falsifies l1, hence satisfies l2 (and vice versa).
  GadgetWitness witness{detail::extract_tuple(std::get<CnfSat>(cond2).witness, n),
                        detail::extract_tuple(std::get<CnfSat>(cond1).witness, n), ci, l1, l2};

  auto emit_q = [&](detail::PpBuilder& b, const std::vector<int>& cv) {
    std::vector<int> args(cv.begin(), cv.begin() + n);
    b.rel(R.name, args);
    auto coeffs_of = [&cv](const LinearTerm& t, int extra_var, const Rational& extra_coeff) {
      std::vector<std::pair<int, Rational>> cs;
      for (const auto& [v, c] : t.coeffs()) cs.emplace_back(cv[v - 1], c);
      if (extra_var >= 0) cs.emplace_back(cv[extra_var - 1], extra_coeff);
      return cs;
    };
    for (int li = 0; li < static_cast<int>(C.size()); ++li) {
      if (li == l1 || li == l2) continue;
      const Literal& l = C.literals[li];
      if (l.is_eq())
        b.affine_nonzero(coeffs_of(l.term, -1, Rational(0)));
      else
        b.affine_zero(coeffs_of(l.term, -1, Rational(0)));
    }
    b.affine_zero(coeffs_of(g1.scaled(Rational(-1)), n + 1, Rational(1)));  // cv[n] = g1
    b.affine_zero(coeffs_of(g2.scaled(Rational(-1)), n + 2, Rational(1)));  // cv[n+1] = g2
  };

  detail::PpBuilder b({"x", "y", "z"});
  bool via_indep2 = i4 != j4;
  if (!via_indep2) {
    // R3(x,y,z) = exists rest. Q[i4 -> x, n+1 -> y, n+2 -> z] & y != z.
    std::vector<int> cv(n + 2, -1);
    cv[i4 - 1] = 0;
    cv[n] = 1;
    cv[n + 1] = 2;
    for (auto& c : cv)
      if (c < 0) c = b.fresh();
    emit_q(b, cv);
    b.neq(1, 2);
  } else {
    // Compose through R4(a,b,c,d) = exists rest. Q[i4->a, n+1->b, j4->c, n+2->d]:
    // S_D(x,y,z) = exists X,Y,Z. R4(y,x,X,Y) & R4(Z,Y,z,x) & X != Z & y != z.
    int X = b.fresh(), Y = b.fresh(), Z = b.fresh();
    std::vector<int> cva(n + 2, -1);
    cva[i4 - 1] = 1;
    cva[n] = 0;
    cva[j4 - 1] = X;
    cva[n + 1] = Y;
    for (auto& c : cva)
      if (c < 0) c = b.fresh();
    emit_q(b, cva);
    std::vector<int> cvb(n + 2, -1);
    cvb[i4 - 1] = Z;
    cvb[n] = Y;
    cvb[j4 - 1] = 2;
    cvb[n + 1] = 0;
    for (auto& c : cvb)
      if (c < 0) c = b.fresh();
    emit_q(b, cvb);
    b.neq(X, Z);
    b.neq(1, 2);
  }

  AffineSdGadget out{std::move(b).take(), std::move(witness), via_indep2};
  Language scratch{Mode::Affine, {R}};
  VerifyResult vr = verify_gadget(out.formula, fixtures::sd_relation(), scratch, SampleSpec{}, cfg);
  if (!is_verified(vr))
    throw std::logic_error("affine_sd_gadget: construction failed semantic verification");
  return out;
}

// ---------------------------------------------------------------------------
// Bounded search for an affine disequality definition

struct NeqSearchResult {
  std::optional<PpFormula> formula;
  long candidates_tried = 0;
};

/// Depth-limited enumeration of single-atom pp-formulas R(args) with args
/// drawn from {x, y, e1, e2}; each candidate is screened on a small grid and
/// survivors are fully verified against !=.
inline NeqSearchResult search_neq_pp(const Language& lang, const SampleSpec& spec = {},
                                     const SemanticsConfig& cfg = {}) {
  NeqSearchResult out;
  Relation target = fixtures::neq_relation();
  SampleSpec screen{2, 24, 5, 3, spec.seed};
  for (const Relation& r : lang.relations) {
    if (r.arity > 5) continue;
    long patterns = 1;
    for (int i = 0; i < r.arity; ++i) patterns *= 4;
    for (long code = 0; code < patterns; ++code) {
      std::vector<int> digits(r.arity);
      long rem = code;
      bool has_x = false, has_y = false;
      for (int i = 0; i < r.arity; ++i) {
        digits[i] = static_cast<int>(rem % 4);
        rem /= 4;
        has_x = has_x || digits[i] == 0;
        has_y = has_y || digits[i] == 1;
      }
      if (!has_x || !has_y) continue;
      ++out.candidates_tried;
      PpFormula g;
      g.free_vars = {"x", "y"};
      std::vector<int> ids(4, -1);
      ids[0] = 0;
      ids[1] = 1;
      std::vector<int> args;
      for (int d : digits) {
        if (ids[d] < 0) {
          g.bound_vars.push_back("e" + std::to_string(g.bound_vars.size() + 1));
          ids[d] = g.var_count() - 1;
        }
        args.push_back(ids[d]);
      }
      g.atoms.push_back({PpAtom::Kind::Rel, r.name, std::move(args)});
      if (!is_verified(verify_gadget(g, target, lang, screen, cfg))) continue;
      if (is_verified(verify_gadget(g, target, lang, spec, cfg))) {
        out.formula = std::move(g);
        return out;
      }
    }
  }
  return out;
}

}  // namespace csplin
