#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace csplin {

using BigInt = boost::multiprecision::cpp_int;

/// Bit length of |v|, with bit_length(0) = 1 so the metric is total.
inline std::size_t bit_length(const BigInt& v) {
  if (v.is_zero()) return 1;
  return static_cast<std::size_t>(boost::multiprecision::msb(boost::multiprecision::abs(v))) + 1;
}

/*
 * Exact rational number in canonical form:
 *   - gcd(|num|, den) == 1
 *   - den > 0, zero is 0/1
 * The sign lives in the numerator. Values are immutable in spirit; all
 * operations return fresh canonical values, so Rationals can be shared
 * freely across threads.
 */
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int n) : num_(n), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}
  Rational(BigInt n) : num_(std::move(n)), den_(1) {}
  Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_.sign(); }

  Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

  Rational operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  // Total order; denominators are positive so cross multiplication is exact.
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    BigInt lhs = a.num_ * b.den_;
    BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Representation size: bit length of numerator plus bit length of denominator.
  std::size_t bit_size() const { return bit_length(num_) + bit_length(den_); }

  /// "p" for integers, "p/q" otherwise.
  std::string to_string() const {
    std::string s = num_.str();
    if (den_ != 1) {
      s += '/';
      s += den_.str();
    }
    return s;
  }

  /// Accepts `p` and `p/q` with optional leading `-`. Empty optional on malformed input.
  static std::optional<Rational> try_parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t slash = text.find('/');
    std::string_view num_part = text.substr(0, slash == std::string_view::npos ? text.size() : slash);
    std::string_view den_part = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
    auto read_int = [](std::string_view s, bool allow_sign) -> std::optional<BigInt> {
      if (s.empty()) return std::nullopt;
      std::size_t i = 0;
      if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
      if (i == s.size()) return std::nullopt;
      for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') return std::nullopt;
      return BigInt(std::string(s));
    };
    auto n = read_int(num_part, true);
    if (!n) return std::nullopt;
    if (slash == std::string_view::npos) return Rational(*std::move(n));
    auto d = read_int(den_part, false);
    if (!d || d->is_zero()) return std::nullopt;
    return Rational(*std::move(n), *std::move(d));
  }

 private:
  void normalize() {
    if (den_.is_zero()) throw std::domain_error("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_.is_zero()) {
      den_ = 1;
      return;
    }
    BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(num_), den_);
    if (g != 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigInt num_;
  BigInt den_;
};

}  // namespace csplin
