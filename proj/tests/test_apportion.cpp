#include <doctest.h>

#include "generators.hpp"
#include "slotfair/apportion.hpp"
#include "slotfair/errors.hpp"
#include "slotfair/linear_value.hpp"

using namespace slotfair;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::parse_error;
}

Economy identical(std::size_t n, const Rational& d) {
  Economy e;
  for (std::size_t i = 0; i < n; ++i) e.agents.push_back({"a" + std::to_string(i + 1), gen::geometric(d)});
  return e;
}

Economy random_economy(gen::Rng& rng, std::size_t n, bool monotone) {
  Economy e;
  Rational need(static_cast<long>(2 * n - 3));
  while (e.n() < n) {
    Rational d = gen::delta(rng, Rational(3, 4), Rational(49, 50));
    UtilityPtr u = gen::coin(rng) ? gen::geometric(d) : gen::perturbed(rng, d, 2, 8, monotone);
    if (kakeya_level(*u) < need || (monotone && !is_monotonic(*u))) continue;
    e.agents.push_back({"a" + std::to_string(e.n() + 1), u});
  }
  return e;
}

const Rational kPrec = pow10_neg(12);

}  // namespace

TEST_CASE("ICA with one agent hands over everything") {
  Allocation a = ica_allocate(identical(1, Rational(1, 2)), kPrec);
  REQUIRE(a.shares.size() == 1);
  CHECK(same_schedule(a.shares[0], EPSet::all()));
}

TEST_CASE("ICA with two halving agents") {
  Economy e = identical(2, Rational(1, 2));
  Allocation a = ica_allocate(e, kPrec);
  CHECK(prefix_bitmap(a.shares[0], 20) == std::vector<TimeSlot>{1});
  CHECK(prefix_bitmap(a.shares[1], 5) == std::vector<TimeSlot>{2, 3, 4, 5});
  FairnessCertificate c = verify_proportional(e, a, kPrec);
  CHECK(c.verdict == Verdict::certified_pass);
}

TEST_CASE("ICA stage one on four near-5/6 agents") {
  Economy e = identical(4, Rational(5, 6) + pow10_neg(9));
  Allocation a = ica_allocate(e, pow10_neg(18));
  const StageTrace& s1 = a.trace.at(0);
  auto members = prefix_bitmap(s1.assigned, 7);
  REQUIRE(members.size() >= 2);
  CHECK(members[0] == 1);
  CHECK(members[1] == 7);
  bool skipped = false;
  for (const auto& ev : s1.events) {
    if (ev.slot == 4) skipped = ev.action == "skipped" && ev.flags.size() == 4;
  }
  CHECK(skipped);
}

TEST_CASE("apportionment gates") {
  Economy slow = identical(3, Rational(2, 3));
  CHECK(code_of([&] { ica_allocate(slow, kPrec); }) == ErrorCode::insufficient_patience);
  CHECK(code_of([&] { proportional_allocate(slow, kPrec); }) == ErrorCode::insufficient_patience);
  Economy bumpy = identical(2, Rational(9, 10));
  bumpy.agents[1].utility = std::make_shared<const UtilityFn>(UtilityFn::perturbed(Rational(9, 10), {{3, Rational(1, 5)}}));
  CHECK(code_of([&] { ica_allocate(bumpy, kPrec); }) == ErrorCode::not_monotonic);
}

TEST_CASE("lifting") {
  Economy mono = identical(2, Rational(3, 4));
  Allocation rr = round_robin(mono);
  Allocation same = lemma3_lift(mono, reordered_economy(mono), rr);
  for (std::size_t i = 0; i < 2; ++i) CHECK(prefix_bitmap(same.shares[i], 40) == prefix_bitmap(rr.shares[i], 40));

  Economy e = identical(2, Rational(3, 4));
  e.agents[0].utility = std::make_shared<const UtilityFn>(UtilityFn::perturbed(Rational(3, 4), {{2, Rational(1, 2)}}));
  Economy re = reordered_economy(e);
  Allocation lifted = lemma3_lift(e, re, round_robin(re));
  CHECK(contains(lifted.shares[0], 2));
  CHECK_FALSE(contains(lifted.shares[1], 2));

  Economy other = identical(2, Rational(1, 2));
  CHECK(code_of([&] { lemma3_lift(e, other, round_robin(other)); }) == ErrorCode::not_a_reordering);

  Economy solo = identical(1, Rational(1, 3));
  Allocation one = lemma3_lift(solo, reordered_economy(solo), round_robin(solo));
  CHECK(prefix_bitmap(one.shares[0], 10).size() == 10);
}

TEST_CASE("proportional allocation passes on a non-monotone pair") {
  Economy e = identical(2, Rational(4, 5));
  e.agents[1].utility = std::make_shared<const UtilityFn>(UtilityFn::perturbed(Rational(4, 5), {{3, Rational(1, 4)}}));
  Allocation a = proportional_allocate(e, kPrec);
  FairnessCertificate c = verify_proportional(e, a, kPrec);
  CHECK(c.verdict == Verdict::certified_pass);
  CHECK(c.partition.ok);
}

TEST_CASE("round robin values") {
  Economy e = identical(3, Rational(5, 6));
  Allocation a = round_robin(e);
  CHECK(*as_epset(a.shares[0]) == EPSet::progression(1, 3));
  CHECK(mass_exact(e.u(0), *as_epset(a.shares[0])) == Rational(36, 91));
  CHECK(a.evidence == PartitionEvidence::exact);
  FairnessCertificate c = verify_proportional(e, a, kPrec);
  CHECK(c.verdict == Verdict::certified_fail);
  CHECK(c.agents[0].verdict == Verdict::certified_pass);
  CHECK(c.agents[2].verdict == Verdict::certified_fail);
}

TEST_CASE("verify_proportional on exact shares") {
  Economy e = identical(2, Rational(1, 2));
  Allocation a;
  a.method = "manual";
  a.shares = {EPSet::finite({1}), EPSet::after(1)};
  FairnessCertificate c = verify_proportional(e, a, kPrec);
  CHECK(c.verdict == Verdict::certified_pass);
  CHECK(c.agents[0].strict);
  a.shares = {EPSet::finite({2}), set_difference(EPSet::all(), EPSet::finite({2}))};
  CHECK(verify_proportional(e, a, kPrec).verdict == Verdict::certified_fail);
  a.shares = {EPSet::finite({1}), EPSet::after(2)};
  CHECK_FALSE(verify_proportional(e, a, kPrec).partition.ok);
}

TEST_CASE("ICA stages never overpay a remaining agent") {
  gen::Rng rng(51);
  for (int run = 0; run < 12; ++run) {
    std::size_t n = static_cast<std::size_t>(2 + run % 3);
    Economy e = random_economy(rng, n, true);
    Allocation a = ica_allocate(e, kPrec);
    Rational share = Rational(1) / Rational(static_cast<long>(n));
    REQUIRE(a.trace.size() == n);
    for (const auto& st : a.trace) {
      if (st.mode == "final") continue;
      for (std::size_t j : st.remaining) {
        if (j != st.recipient) REQUIRE(prefix_value(e.u(j), st.assigned, 250) <= share);
      }
      std::size_t pos = 0;
      while (st.remaining[pos] != st.recipient) ++pos;
      REQUIRE(st.values[pos].lo() >= share - kPrec);
    }
    REQUIRE(audit_partition(a.shares, 250).ok);
    REQUIRE(verify_proportional(e, a, kPrec).verdict == Verdict::certified_pass);
  }
}

TEST_CASE("lifting never lowers an agent's value") {
  gen::Rng rng(52);
  for (int run = 0; run < 40; ++run) {
    std::size_t n = static_cast<std::size_t>(gen::uniform(rng, 1, 4));
    Economy e;
    for (std::size_t i = 0; i < n; ++i) {
      e.agents.push_back({"a" + std::to_string(i + 1),
                          gen::perturbed(rng, gen::delta(rng, Rational(1, 2), Rational(19, 20)), 3, 8, false)});
    }
    Economy re = reordered_economy(e);
    Allocation base = round_robin(re);
    Allocation lifted = lemma3_lift(e, re, base);
    REQUIRE(audit_partition(lifted.shares, 200).ok);
    for (std::size_t i = 0; i < n; ++i) {
      Rational before = mass_exact(re.u(i), *as_epset(base.shares[i]));
      RatInterval after = mass_interval(e.agents[i].utility, lifted.shares[i], kPrec);
      REQUIRE(after.hi() >= before);
      REQUIRE(after.lo() >= before - kPrec);
    }
  }
}

TEST_CASE("round robin partitions T for n up to 8") {
  gen::Rng rng(53);
  for (std::size_t n = 1; n <= 8; ++n) {
    Economy e;
    for (std::size_t i = 0; i < n; ++i) {
      e.agents.push_back({"a" + std::to_string(i + 1), gen::perturbed(rng, gen::delta(rng, Rational(1, 10), Rational(9, 10)), 2, 6, false)});
    }
    Allocation a = round_robin(e);
    PartitionAudit audit = audit_partition(a.shares, 100);
    REQUIRE(audit.exact);
    REQUIRE(audit.ok);
    for (std::size_t i = 0; i < n; ++i) {
      Rational sum(0);
      for (const auto& s : a.shares) sum += mass_exact(e.u(i), *as_epset(s));
      REQUIRE(sum == Rational(1));
    }
  }
}
