#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace slotfair {

/// Exact rational number in canonical form (positive denominator, coprime
/// numerator and denominator). Values are immutable once built; every
/// operation returns a fresh canonical value.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT: integers convert implicitly
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(mpq_class value);

  /// Accepts "p/q", "p", and "-p/q" with decimal integers. Throws
  /// Error(parse_error) on anything else or a zero denominator.
  static Rational parse(std::string_view text);

  const mpq_class& raw() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;
  double to_double() const { return value_.get_d(); }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  /// Throws std::domain_error on division by zero.
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::size_t hash() const;

  /// Wraps a value the caller guarantees is already canonical (GMP results
  /// of mpq arithmetic are). Skips the gcd pass.
  static Rational from_canonical(mpq_class value) {
    Rational r;
    r.value_ = std::move(value);
    return r;
  }

 private:
  mpq_class value_;
};

/// Exact x^e; x^0 = 1 (including 0^0).
Rational rat_pow(const Rational& x, std::uint64_t e);

Rational abs(const Rational& x);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// 10^-k as an exact rational.
Rational pow10_neg(unsigned k);

/// Rational or +infinity. Used for infima over possibly empty index sets.
class ExtendedRational {
 public:
  ExtendedRational() : infinite_(true) {}
  ExtendedRational(Rational v) : infinite_(false), value_(std::move(v)) {}  // NOLINT
  static ExtendedRational infinity() { return ExtendedRational(); }

  bool is_infinite() const { return infinite_; }
  /// Precondition: finite.
  const Rational& value() const { return value_; }
  std::string str() const { return infinite_ ? "inf" : value_.str(); }

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const ExtendedRational& a,
                                          const ExtendedRational& b) {
    if (a.infinite_ || b.infinite_) {
      return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
    }
    return a.value_ <=> b.value_;
  }
  friend bool operator>=(const ExtendedRational& a, const Rational& b) {
    return a.infinite_ || a.value_ >= b;
  }

 private:
  bool infinite_;
  Rational value_;
};

}  // namespace slotfair

template <>
struct std::hash<slotfair::Rational> {
  std::size_t operator()(const slotfair::Rational& r) const { return r.hash(); }
};
