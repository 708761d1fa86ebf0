#pragma once

#include <optional>
#include <string>

#include "slotfair/linear_value.hpp"
#include "slotfair/rational.hpp"
#include "slotfair/schedule.hpp"
#include "slotfair/utility.hpp"

namespace slotfair {

enum class CutMode { greedy, tripartition };
std::string_view cut_mode_name(CutMode m);

struct CutResult {
  Schedule taken;
  Schedule remainder;
  /// The cutter's value of `taken`; equals the target.
  LinearValue taken_value;
  /// Guaranteed divisibility of each side (a theorem floor, not a measurement).
  Rational floor_taken;
  Rational floor_remainder;
  CutMode mode = CutMode::greedy;
  /// Tripartition only: the rank r and whether the mirrored case ran.
  std::uint64_t rank = 0;
  bool mirrored = false;
  std::optional<Schedule> sort, skip, take;
};

/// inf over t in S with u({t}) > 0 of u(S ∩ (t, ∞)) / u({t}); +inf for sets
/// with no positive-weight member.
ExtendedRational divisibility_level(const UtilityFn& u, const EPSet& s);

enum class CheckOutcome { pass, fail, inconclusive };
std::string_view check_outcome_name(CheckOutcome c);

/// Certifies u(S ∩ (t, ∞)) >= k·u({t}) for every t in S ∩ [1, horizon].
CheckOutcome divisibility_check_lazy(const UtilityPtr& u, const Schedule& s, const Rational& k,
                                     TimeSlot horizon);

/// (k - (l - 1)) / l. Throws Error(bound_violation) when l > k + 1.
Rational lemma1_bound(const Rational& k, std::uint64_t l);

/// Greedy scan: take t iff value so far + u({t}) <= v. `floor` certifies
/// the source's divisibility when it is lazy; closed-form sources are
/// measured exactly. Throws Error(precondition_unverified),
/// Error(insufficient_divisibility), Error(target_out_of_range).
CutResult greedy_cut(const UtilityPtr& u, const Schedule& s, const LinearValue& v,
                     const std::optional<Rational>& floor = std::nullopt);

/// Tripartition cut for a monotone cutter on a source that is at least
/// 5-divisible. Both sides keep divisibility (k - 2) / 3 for every monotone
/// agent. Throws as greedy_cut, plus Error(not_monotonic).
CutResult tripartition_cut(const UtilityPtr& u, const Schedule& s, const LinearValue& v,
                           const std::optional<Rational>& floor = std::nullopt);

}  // namespace slotfair
