#pragma once

#include <string>
#include <vector>

#include "slotfair/interval.hpp"
#include "slotfair/schedule.hpp"
#include "slotfair/utility.hpp"

namespace slotfair {

enum class PartitionEvidence { exact, structural };

struct FlagEvent {
  TimeSlot slot;
  std::vector<std::size_t> flags;  // agent indices
  std::string action;              // added | skipped | assigned
};

struct StageTrace {
  std::size_t stage = 0;
  Schedule considered;
  std::vector<std::size_t> remaining;
  std::vector<FlagEvent> events;
  std::size_t recipient = 0;
  Schedule assigned;
  std::string mode;  // single_flag | limit | final
  TimeSlot scanned_to = 0;
  /// Limit stage whose recipient was picked among overlapping intervals.
  bool tie = false;
  /// Value of `assigned` to each remaining agent, same order as `remaining`.
  std::vector<RatInterval> values;
};

struct QueryRecord {
  std::string query;  // evaluate | cut
  std::size_t agent = 0;
  std::string piece;
  std::string target;
  std::string result;
};

struct LedgerEntry {
  std::size_t cut = 0;
  std::string piece;
  std::string mode;
  Rational floor_before;
  Rational floor_after;
};

struct Allocation {
  std::string method;
  std::vector<Schedule> shares;  // one per agent, economy order
  PartitionEvidence evidence = PartitionEvidence::structural;
  std::vector<StageTrace> trace;
  std::vector<QueryRecord> queries;
  std::vector<LedgerEntry> ledger;
  std::size_t cuts = 0;
  std::vector<std::string> notes;
};

enum class Verdict { certified_pass, certified_fail, undecided };
std::string_view verdict_name(Verdict v);

struct AgentCheck {
  std::size_t agent = 0;
  RatInterval value;
  Rational threshold;
  Verdict verdict = Verdict::undecided;
  /// The lower bound clears the threshold itself, not just threshold - precision.
  bool strict = false;
};

struct PairCheck {
  std::size_t i = 0, j = 0;
  RatInterval own, other, gap;
  Verdict verdict = Verdict::undecided;
  bool strict = false;
};

struct PartitionAudit {
  bool exact = false;
  bool ok = false;
  TimeSlot horizon = 0;
  std::string detail;
};

/// Machine-checkable record of an axiom check. A check passes when its
/// certified lower bound is >= threshold - precision and fails when its
/// upper bound is < threshold - precision.
struct FairnessCertificate {
  std::string property;
  Rational precision;
  std::vector<AgentCheck> agents;
  std::vector<PairCheck> pairs;
  PartitionAudit partition;
  Verdict verdict = Verdict::undecided;
};

/// Exact when every share is closed form, otherwise each slot of [1, horizon]
/// is checked to lie in exactly one share.
PartitionAudit audit_partition(const std::vector<Schedule>& shares, TimeSlot horizon);

/// Classifies an enclosure of (value - threshold).
Verdict classify(const RatInterval& gap, const Rational& precision);

}  // namespace slotfair
