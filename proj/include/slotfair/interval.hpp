#pragma once

#include <string>

#include "slotfair/rational.hpp"

namespace slotfair {

enum class Ordering { less, equal, greater, undecided };

std::string_view ordering_name(Ordering o);

/// Closed rational interval [lo, hi] enclosing a value that may not be known
/// exactly. Arithmetic is outward-conservative: the exact result of an
/// operation on members always lies in the result.
class RatInterval {
 public:
  RatInterval() = default;
  /// Throws std::invalid_argument when lo > hi.
  RatInterval(Rational lo, Rational hi);
  static RatInterval point(const Rational& x) { return RatInterval(x, x); }

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }
  bool is_degenerate() const { return lo_ == hi_; }
  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const RatInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }

  friend RatInterval operator+(const RatInterval& a, const RatInterval& b);
  friend RatInterval operator-(const RatInterval& a, const RatInterval& b);
  friend RatInterval operator*(const RatInterval& a, const RatInterval& b);
  /// Throws std::domain_error when b contains zero.
  friend RatInterval operator/(const RatInterval& a, const RatInterval& b);
  RatInterval operator-() const { return RatInterval(-hi_, -lo_); }
  RatInterval scaled(const Rational& c) const;

  friend bool operator==(const RatInterval&, const RatInterval&) = default;

  std::string str() const { return "[" + lo_.str() + ", " + hi_.str() + "]"; }

 private:
  Rational lo_;
  Rational hi_;
};

/// Less if a.hi < b.lo, Greater if a.lo > b.hi, Equal only when both are the
/// same degenerate point, Undecided otherwise.
Ordering interval_compare(const RatInterval& a, const RatInterval& b);

}  // namespace slotfair
