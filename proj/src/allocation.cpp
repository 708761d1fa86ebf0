#include "slotfair/allocation.hpp"

namespace slotfair {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::certified_pass: return "certified_pass";
    case Verdict::certified_fail: return "certified_fail";
    case Verdict::undecided: return "undecided";
  }
  return "undecided";
}

Verdict classify(const RatInterval& gap, const Rational& precision) {
  if (gap.lo() >= -precision) return Verdict::certified_pass;
  if (gap.hi() < -precision) return Verdict::certified_fail;
  return Verdict::undecided;
}

PartitionAudit audit_partition(const std::vector<Schedule>& shares, TimeSlot horizon) {
  PartitionAudit audit;
  bool closed = true;
  for (const auto& s : shares) closed = closed && as_epset(s);
  if (closed) {
    audit.exact = true;
    EPSet seen;
    for (std::size_t i = 0; i < shares.size(); ++i) {
      const EPSet& e = *as_epset(shares[i]);
      if (!set_intersection(seen, e).empty()) {
        audit.detail = "share " + std::to_string(i) + " overlaps an earlier share";
        return audit;
      }
      seen = set_union(seen, e);
    }
    audit.ok = seen == EPSet::all();
    if (!audit.ok) audit.detail = "shares miss slot " + std::to_string(*set_difference(EPSet::all(), seen).next_after(0));
    return audit;
  }
  audit.horizon = horizon;
  for (TimeSlot t = 1; t <= horizon; ++t) {
    int owners = 0;
    for (const auto& s : shares) owners += contains(s, t) ? 1 : 0;
    if (owners != 1) {
      audit.detail = "slot " + std::to_string(t) + " has " + std::to_string(owners) + " owners";
      return audit;
    }
  }
  audit.ok = true;
  return audit;
}

}  // namespace slotfair
