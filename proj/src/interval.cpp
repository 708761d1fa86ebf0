#include "slotfair/interval.hpp"

#include <algorithm>
#include <stdexcept>

namespace slotfair {

std::string_view ordering_name(Ordering o) {
  switch (o) {
    case Ordering::less: return "less";
    case Ordering::equal: return "equal";
    case Ordering::greater: return "greater";
    case Ordering::undecided: return "undecided";
  }
  return "undecided";
}

RatInterval::RatInterval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) throw std::invalid_argument("interval with lo > hi: " + str());
}

RatInterval operator+(const RatInterval& a, const RatInterval& b) {
  return RatInterval(a.lo_ + b.lo_, a.hi_ + b.hi_);
}

RatInterval operator-(const RatInterval& a, const RatInterval& b) {
  return RatInterval(a.lo_ - b.hi_, a.hi_ - b.lo_);
}

RatInterval operator*(const RatInterval& a, const RatInterval& b) {
  Rational c[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  auto [lo, hi] = std::minmax_element(std::begin(c), std::end(c));
  return RatInterval(*lo, *hi);
}

RatInterval operator/(const RatInterval& a, const RatInterval& b) {
  if (b.lo_.sign() <= 0 && b.hi_.sign() >= 0) {
    throw std::domain_error("interval division by an interval containing zero");
  }
  return a * RatInterval(Rational(1) / b.hi_, Rational(1) / b.lo_);
}

RatInterval RatInterval::scaled(const Rational& c) const {
  if (c.sign() >= 0) return RatInterval(lo_ * c, hi_ * c);
  return RatInterval(hi_ * c, lo_ * c);
}

Ordering interval_compare(const RatInterval& a, const RatInterval& b) {
  if (a.hi() < b.lo()) return Ordering::less;
  if (a.lo() > b.hi()) return Ordering::greater;
  if (a.is_degenerate() && b.is_degenerate() && a.lo() == b.lo()) return Ordering::equal;
  return Ordering::undecided;
}

}  // namespace slotfair
