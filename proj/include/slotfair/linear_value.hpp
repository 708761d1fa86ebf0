#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slotfair/interval.hpp"
#include "slotfair/rational.hpp"
#include "slotfair/schedule.hpp"
#include "slotfair/utility.hpp"

namespace slotfair {

/// Largest horizon refinement will push a lazy schedule to before giving up.
inline constexpr TimeSlot kMaxHorizon = 60000;

struct MassTerm {
  Rational coeff;
  UtilityPtr u;
  LazyPtr s;
};

/// constant + Σ coeff · u(S) over lazy schedules S whose value is not known
/// in closed form. Closed-form and certified masses fold into the constant,
/// and identical (utility, schedule) terms merge, so symbolically equal
/// values compare Equal without any approximation.
class LinearValue {
 public:
  LinearValue() = default;
  LinearValue(Rational c) : constant_(std::move(c)) {}  // NOLINT: exact values convert

  /// u(S), expanded through provenance (certified masses, disjoint parts,
  /// subset differences) as far as possible.
  static LinearValue mass(const UtilityPtr& u, const Schedule& s);

  const Rational& constant() const { return constant_; }
  const std::vector<MassTerm>& terms() const { return terms_; }
  bool is_exact() const { return terms_.empty(); }

  friend LinearValue operator+(const LinearValue& a, const LinearValue& b);
  friend LinearValue operator-(const LinearValue& a, const LinearValue& b);
  friend LinearValue operator*(const LinearValue& a, const Rational& c);
  friend LinearValue operator/(const LinearValue& a, const Rational& c);
  LinearValue operator-() const { return *this * Rational(-1); }

  /// Enclosure from every term's prefix sum at horizon >= h plus a tail bound.
  RatInterval enclose_at(TimeSlot h) const;
  /// Enclosure of width <= precision (wider only when a term is known on a
  /// finite prefix alone).
  RatInterval enclose(const Rational& precision) const;

  std::string str() const;

 private:
  void add_term(const Rational& c, const UtilityPtr& u, const LazyPtr& s);

  Rational constant_{0};
  std::vector<MassTerm> terms_;
};

/// Refines both sides until the order is certified. Undecided when the
/// horizon budget is exhausted, or once the difference is enclosed to width
/// <= stop_width when one is given.
Ordering compare(const LinearValue& a, const LinearValue& b, TimeSlot max_horizon = kMaxHorizon,
                 const std::optional<Rational>& stop_width = std::nullopt);

/// u(S) enclosed to width <= precision; degenerate for closed-form S.
RatInterval mass_interval(const UtilityPtr& u, const Schedule& s, const Rational& precision);

/// Exact u(S ∩ [1, h]).
Rational prefix_value(const UtilityFn& u, const Schedule& s, TimeSlot h);

}  // namespace slotfair
