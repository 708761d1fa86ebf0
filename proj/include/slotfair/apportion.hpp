#pragma once

#include <vector>

#include "slotfair/allocation.hpp"
#include "slotfair/mass.hpp"

namespace slotfair {

/// Iterative Cycle Apportionment for monotone utilities with Kakeya level
/// >= 2n - 3. A stage that never sees a single flag stops scanning once the
/// unscanned considered slots are worth <= precision to every remaining agent
/// and some agent's basket is within precision of 1/n; the basket then keeps
/// growing by the rule "add iff nobody flags" and goes to the agent with the
/// largest certified value (lowest index on ties).
/// Throws Error(not_monotonic), Error(insufficient_patience).
Allocation ica_allocate(const Economy& e, const Rational& precision);

/// Carries an allocation of the reordered economy back to the original one:
/// slot by slot, the owner of t picks their favourite remaining slot under
/// their original utility (earliest among ties); unpicked slots go to agent 1.
/// Throws Error(not_a_reordering) when `reordered` does not match `e`.
Allocation lemma3_lift(const Economy& e, const Economy& reordered, const Allocation& alloc);

/// Reorder, apportion, lift. Throws Error(insufficient_patience).
Allocation proportional_allocate(const Economy& e, const Rational& precision);

/// Agent at position p gets every n-th slot starting at p.
Allocation round_robin(const Economy& e);

/// Reordered economy (agent names kept).
Economy reordered_economy(const Economy& e);

FairnessCertificate verify_proportional(const Economy& e, const Allocation& a,
                                        const Rational& precision, TimeSlot horizon = 300);

}  // namespace slotfair
