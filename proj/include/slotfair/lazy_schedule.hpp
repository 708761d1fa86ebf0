#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "slotfair/epset.hpp"

namespace slotfair {

class LazySchedule;
class LinearValue;

/// A schedule: closed form when representable, procedural otherwise.
using Schedule = std::variant<EPSet, std::shared_ptr<const LazySchedule>>;

/// Produces membership of slots 1, 2, 3, ... in order. next(t) is called
/// exactly once per slot, with t increasing by one each call.
class SlotGenerator {
 public:
  virtual ~SlotGenerator() = default;
  virtual bool next(TimeSlot t) = 0;
};

/// The schedule contains a maximal `length`-cycle of `ambient` (see is_dense).
struct DenseFact {
  Schedule ambient;
  std::uint64_t length;
};

/// What produced a lazy schedule, plus structural facts that let measures
/// stay symbolic instead of being approximated.
struct Provenance {
  std::string procedure;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<DenseFact> dense_in;
  /// Exact or symbolic value per utility key, guaranteed by the procedure.
  std::map<std::string, std::shared_ptr<const LinearValue>> certified_masses;
  /// Non-empty: the schedule is the disjoint union of these.
  std::vector<Schedule> disjoint_parts;
  /// Set: the schedule is first \ second with second a subset of first.
  std::optional<std::pair<Schedule, Schedule>> difference_of;
};

/// Procedurally defined schedule with a memoized membership prefix.
///
/// Membership of slot t only depends on slots <= t of the inputs, so the
/// prefix is computed once in increasing order and cached; any query order
/// returns the same answers. All methods are safe to call concurrently.
class LazySchedule {
 public:
  /// `known_limit` marks a schedule known only on [1, limit] (re-ingested
  /// prefixes); asking beyond it throws Error(undecided_at_precision).
  LazySchedule(std::unique_ptr<SlotGenerator> generator, std::optional<EPSet> envelope,
               Provenance provenance, std::optional<TimeSlot> known_limit = std::nullopt);

  bool contains(TimeSlot t) const;
  /// S ∩ [1, h] in increasing order.
  std::vector<TimeSlot> members_upto(TimeSlot h) const;
  /// Largest slot whose membership is already cached.
  TimeSlot computed_to() const;

  const std::optional<EPSet>& envelope() const { return envelope_; }
  const Provenance& provenance() const { return provenance_; }
  const std::optional<TimeSlot>& known_limit() const { return known_limit_; }

  /// Per-schedule cache slot for derived data (e.g. per-utility prefix sums).
  /// `make` runs once per key. Callers must hold mutex() while using the
  /// returned object if it is mutable.
  template <class T, class Make>
  std::shared_ptr<T> memo(const std::string& key, Make make) const {
    std::lock_guard lock(mutex_);
    auto it = memo_.find(key);
    if (it == memo_.end()) it = memo_.emplace(key, std::shared_ptr<void>(make())).first;
    return std::static_pointer_cast<T>(it->second);
  }

  std::recursive_mutex& mutex() const { return mutex_; }

 private:
  void extend_to(TimeSlot t) const;

  mutable std::recursive_mutex mutex_;
  mutable std::unique_ptr<SlotGenerator> generator_;
  mutable std::vector<bool> bits_;
  mutable std::map<std::string, std::shared_ptr<void>> memo_;
  std::optional<EPSet> envelope_;
  Provenance provenance_;
  std::optional<TimeSlot> known_limit_;
};

using LazyPtr = std::shared_ptr<const LazySchedule>;

LazyPtr make_lazy(std::unique_ptr<SlotGenerator> generator, std::optional<EPSet> envelope,
                  Provenance provenance);

}  // namespace slotfair
