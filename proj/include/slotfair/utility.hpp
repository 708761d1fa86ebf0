#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "slotfair/epset.hpp"
#include "slotfair/rational.hpp"

namespace slotfair {

/// Discounted utility over time slots: a probability measure whose weights
/// are geometric, (1-δ)δ^(t-1), except at finitely many adjusted slots.
/// The adjusted sequence is rescaled by one exact factor so the total is 1.
class UtilityFn {
 public:
  /// Throws std::invalid_argument unless 0 < delta < 1.
  static UtilityFn geometric(const Rational& delta);
  /// Raw (pre-normalization) weights at the listed slots. Throws
  /// std::invalid_argument on a negative weight or slot 0.
  static UtilityFn perturbed(const Rational& delta, std::map<TimeSlot, Rational> adjustments);

  bool is_geometric() const { return adjustments_.empty(); }
  const Rational& delta() const { return delta_; }
  /// delta = p / q in lowest terms.
  const mpz_class& p() const { return p_; }
  const mpz_class& q() const { return q_; }
  /// Only slots whose raw weight differs from the geometric one.
  const std::map<TimeSlot, Rational>& adjustments() const { return adjustments_; }
  const Rational& scale() const { return scale_; }
  /// Largest adjusted slot, 0 when geometric.
  TimeSlot last_adjusted() const { return adjustments_.empty() ? 0 : adjustments_.rbegin()->first; }

  /// Raw geometric weight (1-δ)δ^(t-1).
  Rational geometric_raw(TimeSlot t) const;
  /// Raw weight: adjustment or geometric.
  Rational raw(TimeSlot t) const;
  /// u({t}).
  Rational weight(TimeSlot t) const { return scale_ * raw(t); }
  /// u({h+1, h+2, ...}).
  Rational tail_after(TimeSlot h) const;
  /// Smallest h with tail_after(h) <= eps (h >= last_adjusted()).
  TimeSlot horizon_for(const Rational& eps) const;

  /// Canonical identity; equal keys mean equal measures.
  const std::string& key() const { return key_; }
  std::string str() const;

 private:
  UtilityFn() = default;
  void finish();

  Rational delta_;
  mpz_class p_, q_;
  std::map<TimeSlot, Rational> adjustments_;
  Rational scale_{1};
  std::string key_;
};

using UtilityPtr = std::shared_ptr<const UtilityFn>;

struct Agent {
  std::string name;
  UtilityPtr utility;
};

/// n >= 1 agents with unique names.
struct Economy {
  std::vector<Agent> agents;

  std::size_t n() const { return agents.size(); }
  const UtilityFn& u(std::size_t i) const { return *agents.at(i).utility; }
  /// Throws std::invalid_argument on an empty list or duplicate names.
  void validate() const;
};

}  // namespace slotfair
