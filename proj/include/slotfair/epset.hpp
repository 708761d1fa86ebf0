#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace slotfair {

/// Index of a time slot; valid slots are 1, 2, 3, ...
using TimeSlot = std::uint64_t;

/// Eventually periodic subset of {1, 2, ...}.
///
/// Membership: t is in the set iff t <= threshold and t is in the prefix, or
/// t > threshold and (t - threshold - 1) mod period is a residue.
///
/// Always stored in canonical form: the period is the minimal period of the
/// eventual pattern and the threshold is minimal for that period, so equal
/// sets have identical encodings and operator== is structural.
class EPSet {
 public:
  /// The empty set.
  EPSet() = default;

  /// Validates (prefix members in [1, threshold], residues in [0, period))
  /// and canonicalizes. Throws std::invalid_argument on bad input.
  static EPSet make(TimeSlot threshold, std::vector<TimeSlot> prefix, std::uint64_t period,
                    std::vector<std::uint64_t> residues);
  /// Builds the set whose membership on [1, threshold + period] is given by
  /// `member` and which repeats with `period` after `threshold`.
  static EPSet from_predicate(TimeSlot threshold, std::uint64_t period,
                              const std::function<bool(TimeSlot)>& member);

  static EPSet all();                                    // T
  static EPSet finite(std::vector<TimeSlot> members);
  static EPSet progression(TimeSlot first, std::uint64_t step);  // {first, first+step, ...}
  static EPSet after(TimeSlot h);                        // {h+1, h+2, ...}
  static EPSet range(TimeSlot a, TimeSlot b);            // [a, b]

  TimeSlot threshold() const { return threshold_; }
  const std::vector<TimeSlot>& prefix() const { return prefix_; }
  std::uint64_t period() const { return period_; }
  std::vector<std::uint64_t> residues() const;
  /// Members per period of the eventual pattern.
  std::uint64_t per_period() const { return residues_.size(); }

  bool contains(TimeSlot t) const;
  bool empty() const { return prefix_.empty() && residues_.empty(); }
  bool is_infinite() const { return !residues_.empty(); }
  /// Number of members when finite.
  std::uint64_t size() const { return prefix_.size(); }

  /// |S ∩ [1, h]|.
  std::uint64_t count_upto(TimeSlot h) const;
  /// The r-th smallest member (r >= 1). Throws Error(rank_out_of_range).
  TimeSlot tau(std::uint64_t r) const;
  /// Smallest member > t, if any.
  std::optional<TimeSlot> next_after(TimeSlot t) const;
  std::vector<TimeSlot> members_upto(TimeSlot h) const;

  /// {tau_r, tau_{r+1}, ...}.
  EPSet tail(std::uint64_t r) const { return cycle(r, 1); }
  /// {tau_r, tau_{r+l}, tau_{r+2l}, ...}.
  EPSet cycle(std::uint64_t r, std::uint64_t l) const;

  friend bool operator==(const EPSet&, const EPSet&) = default;

  /// Compact human-readable form, e.g. "{1,4,7,...}" style summary.
  std::string str() const;

 private:
  TimeSlot threshold_ = 0;
  std::vector<TimeSlot> prefix_;
  std::uint64_t period_ = 1;
  std::vector<std::uint64_t> residues_;  // sorted offsets in [0, period)

  static EPSet canonical(std::vector<bool> bits, TimeSlot threshold, std::uint64_t period);
};

enum class BoolOp { union_, intersect, difference };

/// Exact set operation, computed over lcm of the periods and the larger
/// threshold, then canonicalized.
EPSet boolean(BoolOp op, const EPSet& a, const EPSet& b);
inline EPSet set_union(const EPSet& a, const EPSet& b) { return boolean(BoolOp::union_, a, b); }
inline EPSet set_intersection(const EPSet& a, const EPSet& b) {
  return boolean(BoolOp::intersect, a, b);
}
inline EPSet set_difference(const EPSet& a, const EPSet& b) {
  return boolean(BoolOp::difference, a, b);
}
bool is_subset(const EPSet& a, const EPSet& b);

}  // namespace slotfair
