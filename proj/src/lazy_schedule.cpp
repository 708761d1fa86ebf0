#include "slotfair/lazy_schedule.hpp"

#include "slotfair/errors.hpp"

namespace slotfair {

LazySchedule::LazySchedule(std::unique_ptr<SlotGenerator> generator,
                           std::optional<EPSet> envelope, Provenance provenance,
                           std::optional<TimeSlot> known_limit)
    : generator_(std::move(generator)),
      envelope_(std::move(envelope)),
      provenance_(std::move(provenance)),
      known_limit_(known_limit) {}

void LazySchedule::extend_to(TimeSlot t) const {
  if (known_limit_ && t > *known_limit_) {
    throw Error(ErrorCode::undecided_at_precision,
                "schedule is only known up to slot " + std::to_string(*known_limit_));
  }
  if (bits_.size() >= t) return;
  bits_.reserve(t);
  for (TimeSlot s = bits_.size() + 1; s <= t; ++s) bits_.push_back(generator_->next(s));
}

bool LazySchedule::contains(TimeSlot t) const {
  if (t == 0) return false;
  std::lock_guard lock(mutex_);
  extend_to(t);
  return bits_[t - 1];
}

std::vector<TimeSlot> LazySchedule::members_upto(TimeSlot h) const {
  std::lock_guard lock(mutex_);
  extend_to(h);
  std::vector<TimeSlot> out;
  for (TimeSlot t = 1; t <= h; ++t) {
    if (bits_[t - 1]) out.push_back(t);
  }
  return out;
}

TimeSlot LazySchedule::computed_to() const {
  std::lock_guard lock(mutex_);
  return bits_.size();
}

LazyPtr make_lazy(std::unique_ptr<SlotGenerator> generator, std::optional<EPSet> envelope,
                  Provenance provenance) {
  return std::make_shared<const LazySchedule>(std::move(generator), std::move(envelope),
                                              std::move(provenance));
}

}  // namespace slotfair
