#pragma once

#include <vector>

#include "slotfair/epset.hpp"
#include "slotfair/rational.hpp"
#include "slotfair/utility.hpp"

namespace slotfair {

/// Exact u(S) by summing the prefix and one geometric series per residue class.
Rational mass_exact(const UtilityFn& u, const EPSet& s);
/// Exact u(S ∩ (h, ∞)).
Rational mass_after(const UtilityFn& u, const EPSet& s, TimeSlot h);

/// Largest k with every tail {t+1, ...} worth at least k·u({t}); slots of
/// zero weight impose no constraint. Infinite only if every weight is 0,
/// which a probability measure rules out, so the result is always finite.
Rational kakeya_level(const UtilityFn& u);
/// Weights non-increasing in t.
bool is_monotonic(const UtilityFn& u);

/// Sorted-weights utility plus the position -> original slot map: position
/// s <= head.size() came from head[s-1]; later positions s from s + tail_offset.
struct Reordering {
  UtilityFn utility;
  std::vector<TimeSlot> head;
  std::uint64_t tail_offset = 0;

  TimeSlot original_slot(TimeSlot s) const {
    return s <= head.size() ? head[s - 1] : s + tail_offset;
  }
};

Reordering monotonic_reordering(const UtilityFn& u);

}  // namespace slotfair
