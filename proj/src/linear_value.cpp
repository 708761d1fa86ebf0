#include "slotfair/linear_value.hpp"

#include <algorithm>

#include "slotfair/mass.hpp"
#include "slotfair/residual.hpp"

namespace slotfair {

namespace {

struct PrefixMemo {
  UtilityPtr u;
  PrefixMass pm;
  TimeSlot valued_at = ~TimeSlot{0};
  Rational lo, hi;  // outward-rounded prefix value and prefix value + tail bound
  explicit PrefixMemo(UtilityPtr up) : u(std::move(up)), pm(*u) {}
};

TimeSlot capped(const LazySchedule& s, TimeSlot h) {
  return s.known_limit() ? std::min(h, *s.known_limit()) : h;
}

Rational tail_bound(const UtilityFn& u, const LazySchedule& s, TimeSlot h) {
  if (s.known_limit() && h >= *s.known_limit() && !s.envelope()) return u.tail_after(h);
  if (s.envelope()) return mass_after(u, *s.envelope(), h);
  return u.tail_after(h);
}

// num / den rounded to a multiple of 2^-bits, down or up.
Rational dyadic(const mpz_class& num, const mpz_class& den, unsigned long bits, bool up) {
  mpz_class scaled = num << bits, q;
  if (up) {
    mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  } else {
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  }
  mpz_class one = 1;
  return Rational(q, mpz_class(one << bits));
}

// Enclosure of u(s) from the prefix at horizon >= h. Bounds are rounded
// outward on a grid well below the tail bound, so exact big fractions never
// enter the caller's arithmetic.
std::pair<Rational, Rational> term_bounds(const UtilityPtr& u, const LazySchedule& s, TimeSlot h) {
  std::lock_guard lock(s.mutex());
  auto memo = s.memo<PrefixMemo>("prefix:" + u->key(), [&] { return new PrefixMemo(u); });
  h = capped(s, h);
  while (memo->pm.horizon() < h) memo->pm.push(s.contains(memo->pm.horizon() + 1));
  TimeSlot at = memo->pm.horizon();
  if (memo->valued_at != at) {
    Rational tail = tail_bound(*u, s, at);
    mpz_class num, den;
    memo->pm.fraction(num, den);
    const mpq_class& t = tail.raw();
    long tail_bits = t.get_num() == 0 ? 64
                                      : static_cast<long>(mpz_sizeinbase(t.get_den().get_mpz_t(), 2)) -
                                            static_cast<long>(mpz_sizeinbase(t.get_num().get_mpz_t(), 2));
    unsigned long bits = static_cast<unsigned long>(std::max(64L, tail_bits + 40));
    memo->lo = dyadic(num, den, bits, false);
    // hi = prefix + tail, rounded up as one fraction.
    mpz_class hn = num * t.get_den() + t.get_num() * den, hd = den * t.get_den();
    memo->hi = dyadic(hn, hd, bits, true);
    memo->valued_at = at;
  }
  return {memo->lo, memo->hi};
}

}  // namespace

LinearValue LinearValue::mass(const UtilityPtr& u, const Schedule& s) {
  if (auto e = as_epset(s)) return LinearValue(mass_exact(*u, *e));
  const LazyPtr& lazy = std::get<LazyPtr>(s);
  const Provenance& prov = lazy->provenance();
  auto it = prov.certified_masses.find(u->key());
  if (it != prov.certified_masses.end()) return *it->second;
  if (!prov.disjoint_parts.empty()) {
    LinearValue sum;
    for (const auto& part : prov.disjoint_parts) sum = sum + mass(u, part);
    return sum;
  }
  if (prov.difference_of) return mass(u, prov.difference_of->first) - mass(u, prov.difference_of->second);
  LinearValue v;
  v.add_term(Rational(1), u, lazy);
  return v;
}

void LinearValue::add_term(const Rational& c, const UtilityPtr& u, const LazyPtr& s) {
  if (c.is_zero()) return;
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->s == s && it->u->key() == u->key()) {
      it->coeff += c;
      if (it->coeff.is_zero()) terms_.erase(it);
      return;
    }
  }
  terms_.push_back({c, u, s});
}

LinearValue operator+(const LinearValue& a, const LinearValue& b) {
  LinearValue r = a;
  r.constant_ += b.constant_;
  for (const auto& t : b.terms_) r.add_term(t.coeff, t.u, t.s);
  return r;
}

LinearValue operator-(const LinearValue& a, const LinearValue& b) {
  LinearValue r = a;
  r.constant_ -= b.constant_;
  for (const auto& t : b.terms_) r.add_term(-t.coeff, t.u, t.s);
  return r;
}

LinearValue operator*(const LinearValue& a, const Rational& c) {
  if (c.is_zero()) return LinearValue();
  LinearValue r = a;
  r.constant_ *= c;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

LinearValue operator/(const LinearValue& a, const Rational& c) { return a * (Rational(1) / c); }

RatInterval LinearValue::enclose_at(TimeSlot h) const {
  Rational lo = constant_, hi = constant_;
  for (const auto& t : terms_) {
    auto [a, b] = term_bounds(t.u, *t.s, h);
    if (t.coeff.sign() > 0) {
      lo += t.coeff * a;
      hi += t.coeff * b;
    } else {
      lo += t.coeff * b;
      hi += t.coeff * a;
    }
  }
  return RatInterval(lo, hi);
}

RatInterval LinearValue::enclose(const Rational& precision) const {
  if (terms_.empty()) return RatInterval::point(constant_);
  Rational weight(0);
  for (const auto& t : terms_) weight += abs(t.coeff);
  // Half the budget for tails; the outward rounding stays far below the rest.
  Rational each = precision / (weight * Rational(2));
  TimeSlot h = 1;
  for (const auto& t : terms_) h = std::max(h, t.u->horizon_for(each));
  return enclose_at(h);
}

std::string LinearValue::str() const {
  std::string s = constant_.str();
  for (const auto& t : terms_) {
    s += (t.coeff.sign() < 0 ? " - " : " + ") + abs(t.coeff).str() + "*u[" + t.u->key() + "](" +
         t.s->provenance().procedure + ")";
  }
  return s;
}

Ordering compare(const LinearValue& a, const LinearValue& b, TimeSlot max_horizon,
                 const std::optional<Rational>& stop_width) {
  LinearValue d = a - b;
  if (d.is_exact()) {
    int s = d.constant().sign();
    return s < 0 ? Ordering::less : (s > 0 ? Ordering::greater : Ordering::equal);
  }
  // Terms already computed further are enclosed at their own depth for free,
  // so only the shallowest term decides where refinement starts.
  TimeSlot h = ~TimeSlot{0};
  for (const auto& t : d.terms()) h = std::min(h, t.s->computed_to());
  h = std::min(std::max<TimeSlot>(h, 64), max_horizon);
  for (;;) {
    RatInterval box = d.enclose_at(h);
    if (box.lo().sign() > 0) return Ordering::greater;
    if (box.hi().sign() < 0) return Ordering::less;
    if (stop_width && box.width() <= *stop_width) return Ordering::undecided;
    bool frozen = true;
    for (const auto& t : d.terms()) frozen = frozen && t.s->known_limit() && *t.s->known_limit() <= h;
    if (frozen || h >= max_horizon) return Ordering::undecided;
    h = std::min(max_horizon, h + std::max<TimeSlot>(64, h / 4));
  }
}

RatInterval mass_interval(const UtilityPtr& u, const Schedule& s, const Rational& precision) {
  return LinearValue::mass(u, s).enclose(precision);
}

Rational prefix_value(const UtilityFn& u, const Schedule& s, TimeSlot h) {
  PrefixMass pm(u);
  for (TimeSlot t = 1; t <= h; ++t) pm.push(contains(s, t));
  return pm.value();
}

}  // namespace slotfair
