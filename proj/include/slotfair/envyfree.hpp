#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slotfair/allocation.hpp"
#include "slotfair/cutters.hpp"

namespace slotfair {

/// Current partition of T plus a divisibility floor per (piece, agent).
struct PartitionState {
  std::vector<Schedule> pieces;
  std::vector<std::string> names;
  std::vector<std::vector<Rational>> floors;  // [piece][agent]
  std::size_t cuts = 0;

  /// One piece, T, at `floor` for all agents.
  static PartitionState whole(std::size_t agents, const Rational& floor);
  /// Throws std::out_of_range for an unknown name.
  std::size_t index_of(const std::string& name) const;
};

/// Indices into PartitionState::pieces. A cut at 0 or at the full value
/// leaves the partition alone and reports one side as absent.
struct RwCut {
  std::optional<std::size_t> taken;
  std::optional<std::size_t> remainder;
  std::optional<CutResult> result;
};

/// Evaluate query: u(piece) enclosed to width <= precision.
RatInterval rw_evaluate(const UtilityPtr& u, const Schedule& piece, const Rational& precision);

/// Cut query: `agent` removes a part worth v from piece `piece`. The taken
/// part keeps the piece's slot in `pieces`; the remainder is appended.
/// Floors move for every agent: (k-2)/3 on both sides of a tripartition cut,
/// k-1 on the remainder and 0 on the taken side of a greedy cut.
/// Throws Error(insufficient_divisibility) when the cutter's floor is below 5
/// (tripartition) or 1 (greedy), and Error(target_out_of_range).
RwCut rw_cut(PartitionState& state, const Economy& e, std::size_t agent, std::size_t piece,
             const LinearValue& v, CutMode mode, const std::string& taken_name,
             const std::string& remainder_name);

/// 2·3^(c-1) - 1. Throws std::invalid_argument for c = 0.
Rational d_bound(std::uint64_t c);
/// Decimal digit count of d(c) without building it.
std::uint64_t d_bound_digits(std::uint64_t c);

struct PatienceBound {
  std::uint64_t agents = 0;
  /// The cut count as a power tower, innermost levels evaluated while small.
  std::string cuts;
  /// d(cuts), symbolic.
  std::string divisibility;
  /// Present only when the tower is tiny enough to evaluate (n = 1).
  std::optional<Rational> numeric;
};

PatienceBound p_bound(std::uint64_t n);
/// Throws Error(tower_too_large) for n >= 2.
Rational p_bound_numeric(std::uint64_t n);

/// Agent 1 greedy-cuts T at 1/2, agent 2 chooses. Throws
/// Error(insufficient_patience) when a Kakeya level is below 1.
Allocation divide_and_choose(const Economy& e, const Rational& precision);

/// Selfridge-Conway over cut queries, at most five cuts, starting from
/// floor d(5) = 161 for every agent. Throws Error(insufficient_patience),
/// Error(not_monotonic).
Allocation selfridge_conway(const Economy& e, const Rational& precision);

FairnessCertificate verify_envy_free(const Economy& e, const Allocation& a, const Rational& precision,
                                     TimeSlot horizon = 300);

}  // namespace slotfair
