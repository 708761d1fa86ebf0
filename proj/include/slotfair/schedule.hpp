#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slotfair/epset.hpp"
#include "slotfair/lazy_schedule.hpp"

namespace slotfair {

/// Scan budget for rank searches on lazy schedules.
inline constexpr TimeSlot kLazyScanBudget = TimeSlot{1} << 22;

bool contains(const Schedule& s, TimeSlot t);
inline const EPSet* as_epset(const Schedule& s) { return std::get_if<EPSet>(&s); }
inline LazyPtr as_lazy(const Schedule& s) {
  auto p = std::get_if<LazyPtr>(&s);
  return p ? *p : nullptr;
}

/// S ∩ [1, horizon].
std::vector<TimeSlot> prefix_bitmap(const Schedule& s, TimeSlot horizon);

/// The EPSet itself, or the lazy schedule's envelope when it has one.
std::optional<EPSet> envelope_of(const Schedule& s);

/// r-th smallest member. Throws Error(rank_out_of_range) for short finite
/// sets and Error(undecided_at_precision) when a lazy scan exceeds its budget.
TimeSlot tau(const Schedule& s, std::uint64_t r);
Schedule tail(const Schedule& s, std::uint64_t r);
Schedule cycle(const Schedule& s, std::uint64_t r, std::uint64_t l);

/// General set operations: EPSet when both inputs are, lazy otherwise.
Schedule schedule_union(const Schedule& a, const Schedule& b);
Schedule schedule_intersection(const Schedule& a, const Schedule& b);
Schedule schedule_difference(const Schedule& a, const Schedule& b);

/// Union of schedules the caller knows to be disjoint; the lazy result
/// records its parts so measures add up symbolically.
Schedule union_disjoint(const std::vector<Schedule>& parts, Provenance prov = {});
/// a \ b where the caller knows b ⊆ a; the lazy result records both.
Schedule difference_subset(const Schedule& a, const Schedule& b, Provenance prov = {});

/// Whether `sstar` contains a maximal l-cycle of S starting within l ranks
/// of min(sstar). nullopt when a lazy schedule carries no deciding fact.
/// Throws Error(not_a_subset) when an EPSet sstar is not inside S.
std::optional<bool> is_dense(const Schedule& sstar, const EPSet& s, std::uint64_t l);

/// Same schedule object (EPSet equality or identical lazy pointer).
bool same_schedule(const Schedule& a, const Schedule& b);

std::string describe(const Schedule& s);

}  // namespace slotfair
