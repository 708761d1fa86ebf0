#pragma once

#include <gmpxx.h>

#include "slotfair/epset.hpp"
#include "slotfair/rational.hpp"
#include "slotfair/utility.hpp"

namespace slotfair {

/// Running value u(S ∩ [1, h]) for a growing horizon h.
///
/// Geometric slots accumulate into one integer G = Σ p^(t-1) q^(h-t), so a
/// step costs a small-integer multiply and an add; no gcd until value().
class PrefixMass {
 public:
  explicit PrefixMass(const UtilityFn& u);

  TimeSlot horizon() const { return h_; }
  /// Advances the horizon by one slot.
  void push(bool member);
  /// Exact u(S ∩ [1, horizon]).
  Rational value() const;
  /// The same value as an unreduced fraction num / den.
  void fraction(mpz_class& num, mpz_class& den) const;

 private:
  const UtilityFn* u_;
  TimeSlot h_ = 0;
  mpz_class g_ = 0, qh_ = 1, ph_ = 1;  // G, q^h, p^h
  mpq_class adjusted_ = 0;             // raw adjusted weights of members
};

/// Tracks ρ = residual / geometric_weight(t) for one utility while t walks
/// forward, so each slot costs O(size) integer work instead of a rational
/// multiply. The residual is compared against weight(t) via ρ vs c_t, where
/// c_t = raw(t) / geometric_raw(t) is 1 on non-adjusted slots.
class ResidualTracker {
 public:
  ResidualTracker() = default;
  /// Starts at slot t with the given exact residual.
  ResidualTracker(const UtilityFn& u, const Rational& residual, TimeSlot t = 1);

  TimeSlot slot() const { return t_; }
  /// sign(residual - weight(t)).
  int compare_weight() const;
  /// residual -= weight(t).
  void take();
  /// residual += weight(t).
  void give();
  /// t -> t + 1.
  void advance();
  bool residual_is_zero() const { return sgn(num_) == 0; }
  int residual_sign() const { return sgn(num_); }
  /// Exact residual (costs a big multiply).
  Rational residual() const;

 private:
  void adjust(int sign);

  const UtilityFn* u_ = nullptr;
  TimeSlot t_ = 1;
  mpz_class num_ = 0, den_ = 1;
};

}  // namespace slotfair
