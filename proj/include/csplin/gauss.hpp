#pragma once

#include "csplin/ast.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace csplin {

/*
 * Incremental exact Gaussian elimination over the rationals.
 *
 * Rows are linear terms interpreted as "= 0", kept in reduced row echelon
 * form: every row's pivot variable (its lowest ordinal) occurs in no other
 * row, and rows are gcd-shortened to integer content 1 after clearing
 * denominators, with the pivot coefficient positive. Equations are added one
 * by one; the row list only grows and row indices are stable, which lets
 * callers keep residual terms partially reduced and catch up lazily.
 */
class TriangularSystem {
 public:
  enum class AddOutcome { Added, Redundant, Inconsistent };

  std::size_t rank() const { return rows_.size(); }
  const std::vector<LinearTerm>& rows() const { return rows_; }
  const std::map<int, std::size_t>& pivots() const { return pivots_; }
  bool is_pivot(int var) const { return pivots_.count(var) != 0; }

  /// Clears denominators, divides out the integer content, and makes the
  /// leading coefficient positive. Preserves the zero set.
  static LinearTerm shorten(LinearTerm row) {
    if (row.is_zero()) return row;
    BigInt lcm_den = 1;
    for (const auto& [v, c] : row.coeffs()) lcm_den = boost::multiprecision::lcm(lcm_den, c.den());
    lcm_den = boost::multiprecision::lcm(lcm_den, row.constant().den());
    BigInt gcd_num = 0;
    auto fold = [&](const Rational& c) {
      if (!c.is_zero()) gcd_num = boost::multiprecision::gcd(gcd_num, boost::multiprecision::abs(c.num() * (lcm_den / c.den())));
    };
    for (const auto& [v, c] : row.coeffs()) fold(c);
    fold(row.constant());
    Rational scale(lcm_den, gcd_num);
    const Rational& lead = row.has_vars() ? row.leading_coeff() : row.constant();
    if (lead.sign() < 0) scale = -scale;
    return row.scaled(scale);
  }

  /// Eliminates every pivot variable from t; the result is congruent to t
  /// modulo the row space and mentions no pivot variable.
  LinearTerm reduce_term(LinearTerm t) const {
    std::vector<std::pair<std::size_t, Rational>> hits;
    for (const auto& [v, c] : t.coeffs()) {
      auto it = pivots_.find(v);
      if (it != pivots_.end()) hits.emplace_back(it->second, c);
    }
    // Rows carry no pivot of any other row, so one pass suffices.
    for (const auto& [row, c] : hits)
      t.add_scaled(rows_[row], -(c / rows_[row].leading_coeff()));
    return t;
  }

  /// True iff eq = 0 follows from the system: the reduction of eq is the
  /// all-zero term.
  bool entails(const LinearTerm& eq) const { return reduce_term(eq).is_zero(); }

  AddOutcome add_equation(const LinearTerm& eq) {
    LinearTerm r = reduce_term(eq);
    if (r.is_zero()) return AddOutcome::Redundant;
    if (!r.has_vars()) return AddOutcome::Inconsistent;  // nonzero constant = 0
    r = shorten(std::move(r));
    int pivot = r.leading_var();
    // Keep reduced form: clear the new pivot from every existing row.
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      Rational c = rows_[i].coeff(pivot);
      if (c.is_zero()) continue;
      rows_[i].add_scaled(r, -(c / r.leading_coeff()));
      rows_[i] = shorten(std::move(rows_[i]));
      note_row_size(rows_[i]);
    }
    note_row_size(r);
    pivots_[pivot] = rows_.size();
    rows_.push_back(std::move(r));
    return AddOutcome::Added;
  }

  /// Largest total bit size any row reached over the system's lifetime.
  std::size_t peak_row_bits() const { return peak_row_bits_; }

 private:
  void note_row_size(const LinearTerm& row) {
    std::size_t s = row.bit_size();
    if (s > peak_row_bits_) peak_row_bits_ = s;
  }

  std::vector<LinearTerm> rows_;
  std::map<int, std::size_t> pivots_;
  std::size_t peak_row_bits_ = 0;
};

}  // namespace csplin
