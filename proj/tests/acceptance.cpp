// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "generators.hpp"
#include "slotfair/apportion.hpp"
#include "slotfair/envyfree.hpp"
#include "slotfair/errors.hpp"
#include "slotfair/linear_value.hpp"

using namespace slotfair;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("criterion %2d %-34s %s  (%.2fs) %s\n", id, name.c_str(), o.pass ? "PASS" : "FAIL", secs,
              o.detail.c_str());
  std::fflush(stdout);
}

std::vector<TimeSlot> upto(const Schedule& s, TimeSlot h) { return prefix_bitmap(s, h); }

std::string join(const std::vector<TimeSlot>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

const Rational kTol18 = pow10_neg(18);

Outcome tripartition_trace() {
  auto u = gen::geometric(Rational(5, 6));
  auto start = Clock::now();
  CutResult c = tripartition_cut(u, EPSet::all(), LinearValue(Rational(11, 50)));
  RatInterval value = mass_interval(u, c.taken, kTol18);
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::vector<std::string> bad;
  if (c.rank != 4) bad.push_back("r=" + std::to_string(c.rank));
  if (!c.sort || !same_schedule(*c.sort, EPSet::progression(4, 3))) bad.push_back("sort");
  if (!c.skip || !same_schedule(*c.skip, EPSet::progression(5, 3))) bad.push_back("skip");
  if (!c.take || !same_schedule(*c.take, EPSet::progression(6, 3))) bad.push_back("take");
  auto taken = upto(c.taken, 12);
  if (taken != std::vector<TimeSlot>{6, 7, 9, 12}) bad.push_back("taken=" + join(taken));
  if (!value.contains(Rational(11, 50)) || value.width() > kTol18) bad.push_back("value " + value.str());
  if (secs >= 1.0) bad.push_back("slow");
  Outcome o{bad.empty(), "r=" + std::to_string(c.rank) + " taken∩[1,12]=" + join(taken)};
  for (auto& b : bad) o.detail += " bad:" + b;
  return o;
}

Outcome ica_stage_one() {
  Economy e;
  Rational d = Rational(5, 6) + pow10_neg(9);
  for (int i = 1; i <= 4; ++i) e.agents.push_back({"a" + std::to_string(i), gen::geometric(d)});
  auto start = Clock::now();
  Allocation a = ica_allocate(e, kTol18);
  (void)audit_partition(a.shares, 300);
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const StageTrace& s1 = a.trace.at(0);
  auto members = upto(s1.assigned, 7);
  bool skip4 = false, first_two = members.size() >= 2 && members[0] == 1 && members[1] == 7;
  for (const auto& ev : s1.events) {
    if (ev.slot == 4) skip4 = ev.action == "skipped" && ev.flags.size() == 4;
  }
  bool ok = first_two && skip4 && secs < 5.0;
  return {ok, "stage-1 basket∩[1,7]=" + join(members) + (skip4 ? " slot 4 skipped on 4 flags" : " slot 4 not skipped")};
}

// Greedy picks of a random target, cut off after m picks so the sum terminates.
Rational terminating_target(const UtilityFn& u, const EPSet& s, const Rational& v0, gen::Rng& rng) {
  Rational sum = 0, chosen = 0;
  long m = gen::uniform(rng, 1, 12), picks = 0;
  for (TimeSlot t = 1; t <= 4000 && picks < m; ++t) {
    if (!s.contains(t)) continue;
    Rational w = u.weight(t);
    if (sum + w <= v0) {
      sum += w;
      if (w.sign() > 0) {
        chosen = sum;
        ++picks;
      }
    }
  }
  return chosen;
}

Outcome greedy_exactness() {
  gen::Rng rng(3);
  int done = 0, failures_here = 0;
  std::string first;
  while (done < 200) {
    auto u = gen::geometric(gen::delta(rng, Rational(1, 2), Rational(99, 100)));
    EPSet s = gen::epset(rng, 12, 30, gen::uniform(rng, 1, 9) / 10.0);
    ExtendedRational k = divisibility_level(*u, s);
    if (k.is_infinite() || k.value() < Rational(1) || k.value() > Rational(6)) continue;
    Rational total = mass_exact(*u, s);
    Rational v = terminating_target(*u, s, total * Rational(gen::uniform(rng, 1, 99), 100), rng);
    if (v.sign() == 0) continue;
    ++done;
    CutResult c = greedy_cut(u, s, LinearValue(v));
    LinearValue got = LinearValue::mass(u, c.taken);
    bool exact = as_epset(c.taken) && got.is_exact() && got.constant() == v;
    CheckOutcome rem = divisibility_check_lazy(u, c.remainder, k.value() - Rational(1), 200);
    if (!exact || rem != CheckOutcome::pass) {
      ++failures_here;
      if (first.empty()) first = u->str() + " S=" + s.str() + " v=" + v.str() + " k=" + k.value().str();
    }
  }
  return {failures_here == 0, std::to_string(done) + " instances, " + std::to_string(failures_here) + " failures " + first};
}

UtilityPtr monotone_agent(gen::Rng& rng, const Rational& lo, const Rational& hi) {
  Rational d = gen::delta(rng, lo, hi);
  return gen::coin(rng, 0.6) ? gen::geometric(d) : gen::perturbed(rng, d, 0, 6, true);
}

Outcome tripartition_floors() {
  gen::Rng rng(4);
  int done = 0, failures_here = 0;
  std::string first;
  while (done < 200) {
    auto ui = monotone_agent(rng, Rational(9, 10), Rational(99, 100));
    auto uj = monotone_agent(rng, Rational(9, 10), Rational(99, 100));
    EPSet s = gen::coin(rng, 0.3) ? EPSet::all() : gen::epset(rng, 8, 6, 0.7);
    ExtendedRational ki = divisibility_level(*ui, s), kj = divisibility_level(*uj, s);
    if (!is_monotonic(*ui) || !is_monotonic(*uj)) continue;
    if (ki.is_infinite() || kj.is_infinite() || ki.value() < Rational(5) || kj.value() < Rational(5)) continue;
    Rational total = mass_exact(*ui, s);
    Rational v = total * Rational(gen::uniform(rng, 1, 999), 1000);
    if (gen::coin(rng, 0.3)) v = terminating_target(*ui, s, v, rng);
    if (v.sign() == 0 || v >= total) continue;
    ++done;
    CutResult c = tripartition_cut(ui, s, LinearValue(v));
    bool ok = true;
    for (auto [u, k] : {std::pair{ui, ki.value()}, std::pair{uj, kj.value()}}) {
      Rational floor = (k - Rational(2)) / Rational(3);
      ok = ok && divisibility_check_lazy(u, c.taken, floor, 200) == CheckOutcome::pass;
      ok = ok && divisibility_check_lazy(u, c.remainder, floor, 200) == CheckOutcome::pass;
    }
    RatInterval val = mass_interval(ui, c.taken, kTol18);
    ok = ok && val.contains(v) && val.width() <= kTol18;
    if (as_epset(c.taken)) ok = ok && val.is_degenerate();
    if (!ok) {
      ++failures_here;
      if (first.empty()) first = ui->str() + " / " + uj->str() + " S=" + s.str() + " v=" + v.str();
    }
  }
  return {failures_here == 0, std::to_string(done) + " instances, " + std::to_string(failures_here) + " failures " + first};
}

Outcome dense_cycles() {
  gen::Rng rng(5);
  int done = 0, failures_here = 0;
  std::string first;
  while (done < 200) {
    auto u = monotone_agent(rng, Rational(1, 2), Rational(97, 100));
    if (!is_monotonic(*u)) continue;
    Rational k = kakeya_level(*u);
    mpz_class kmax = k.numerator() / k.denominator();
    long lmax = std::min<long>(kmax.get_si() + 1, 12);
    std::uint64_t l = static_cast<std::uint64_t>(gen::uniform(rng, 1, lmax));
    TimeSlot rstar = static_cast<TimeSlot>(gen::uniform(rng, 1, 10));
    TimeSlot rprime = static_cast<TimeSlot>(gen::uniform(rng, 0, static_cast<long>(l) - 1));
    EPSet extra = set_intersection(gen::epset(rng, 10, 8, 0.3), EPSet::after(rstar));
    EPSet sstar = set_union(set_union(EPSet::finite({rstar}), EPSet::progression(rstar + rprime, l)), extra);
    ++done;
    auto dense = is_dense(sstar, EPSet::all(), l);
    ExtendedRational level = divisibility_level(*u, sstar);
    Rational bound = lemma1_bound(k, l);
    if (!dense.value_or(false) || !(level >= bound)) {
      ++failures_here;
      if (first.empty()) first = u->str() + " l=" + std::to_string(l) + " S*=" + sstar.str();
    }
  }
  return {failures_here == 0, std::to_string(done) + " instances, " + std::to_string(failures_here) + " failures " + first};
}

Outcome reordering() {
  gen::Rng rng(6);
  int failures_here = 0;
  std::string first;
  for (int done = 0; done < 200; ++done) {
    Rational d = gen::delta(rng, Rational(1, 3), Rational(98, 100));
    auto u = gen::perturbed(rng, d, static_cast<int>(gen::uniform(rng, 1, 6)), 12, false, true);
    Reordering m = monotonic_reordering(*u);
    bool ok = is_monotonic(m.utility) && kakeya_level(m.utility) >= kakeya_level(*u);
    // Window long enough that every weight past it is below all positive head weights.
    Rational smallest = 1;
    for (TimeSlot t = 1; t <= u->last_adjusted(); ++t) {
      if (u->weight(t).sign() > 0) smallest = min(smallest, u->weight(t));
    }
    TimeSlot h = u->last_adjusted() + 1;
    while (u->weight(h) >= smallest) ++h;
    h += 3;
    std::vector<Rational> orig;
    for (TimeSlot t = 1; t <= h; ++t) {
      if (u->weight(t).sign() > 0) orig.push_back(u->weight(t));
    }
    std::sort(orig.rbegin(), orig.rend());
    for (std::size_t s = 0; ok && s < orig.size(); ++s) {
      ok = m.utility.weight(s + 1) == orig[s] && u->weight(m.original_slot(s + 1)) == orig[s];
    }
    if (!ok) {
      ++failures_here;
      if (first.empty()) first = u->str();
    }
  }
  return {failures_here == 0, "200 instances, " + std::to_string(failures_here) + " failures " + first};
}

Economy random_economy(gen::Rng& rng, std::size_t n, const Rational& need, bool monotone_only) {
  Economy e;
  for (std::size_t i = 0; i < n; ++i) {
    for (;;) {
      // Kakeya >= need requires delta >= need / (need + 1).
      Rational lo = need / (need + Rational(1));
      Rational d = gen::delta(rng, max(lo, Rational(1, 2)), max(lo, Rational(1, 2)) + (Rational(1) - max(lo, Rational(1, 2))) * Rational(3, 4));
      UtilityPtr u;
      int kind = static_cast<int>(gen::uniform(rng, 0, 2));
      if (kind == 0) u = gen::geometric(d);
      else u = gen::perturbed(rng, d, static_cast<int>(gen::uniform(rng, 1, 3)), 8, monotone_only || kind == 1);
      if (kakeya_level(*u) < need) continue;
      if (monotone_only && !is_monotonic(*u)) continue;
      e.agents.push_back({"a" + std::to_string(i + 1), u});
      break;
    }
  }
  return e;
}

Outcome proportional_end_to_end() {
  gen::Rng rng(7);
  const Rational prec = pow10_neg(12);
  int failures_here = 0, non_monotone = 0;
  std::string first;
  auto start = Clock::now();
  for (int run = 0; run < 50; ++run) {
    std::size_t n = static_cast<std::size_t>(2 + run % 4);
    Economy e = random_economy(rng, n, Rational(static_cast<long>(2 * n - 3)), false);
    for (std::size_t i = 0; i < n; ++i) non_monotone += !is_monotonic(e.u(i));
    Allocation a = proportional_allocate(e, prec);
    FairnessCertificate c = verify_proportional(e, a, prec, 300);
    bool ok = c.verdict == Verdict::certified_pass;
    Rational share = Rational(1) / Rational(static_cast<long>(n));
    for (const auto& ac : c.agents) ok = ok && ac.value.lo() >= share - prec;
    if (!ok) {
      ++failures_here;
      if (first.empty()) first = "run " + std::to_string(run) + " verdict " + std::string(verdict_name(c.verdict));
    }
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  bool ok = failures_here == 0 && secs < 60.0;
  return {ok, "50 economies (" + std::to_string(non_monotone) + " non-monotone agents), " +
                  std::to_string(failures_here) + " failures " + first};
}

Outcome envy_free_two() {
  gen::Rng rng(8);
  int failures_here = 0;
  std::string first;
  for (int run = 0; run < 50; ++run) {
    Economy e = random_economy(rng, 2, Rational(1), false);
    Allocation a = divide_and_choose(e, kTol18);
    FairnessCertificate c = verify_envy_free(e, a, kTol18, 300);
    LinearValue v0 = LinearValue::mass(e.agents[0].utility, a.shares[0]);
    LinearValue v1 = LinearValue::mass(e.agents[0].utility, a.shares[1]);
    bool ok = c.verdict == Verdict::certified_pass && v0.is_exact() && v1.is_exact() &&
              v0.constant() == Rational(1, 2) && v1.constant() == Rational(1, 2) && a.cuts == 1;
    if (!ok) {
      ++failures_here;
      if (first.empty()) first = "run " + std::to_string(run) + " " + e.u(0).str() + " / " + e.u(1).str();
    }
  }
  return {failures_here == 0, "50 economies, " + std::to_string(failures_here) + " failures " + first};
}

bool ledger_ok(const Allocation& a) {
  const long expected[] = {161, 53, 17, 5, 1};
  if (a.cuts > 5 || a.ledger.size() != a.cuts) return false;
  for (std::size_t k = 0; k < a.ledger.size(); ++k) {
    const LedgerEntry& l = a.ledger[k];
    if (l.floor_before != Rational(expected[k]) || l.floor_before < Rational(1)) return false;
    bool last = k + 1 == a.ledger.size() && a.cuts == 5;
    if ((l.mode == "greedy") != last) return false;
  }
  return true;
}

Outcome envy_free_three() {
  gen::Rng rng(9);
  const Rational prec = pow10_neg(15);
  int failures_here = 0, five = 0;
  std::string first;
  auto start = Clock::now();
  for (int run = 0; run < 25; ++run) {
    Economy e;
    bool identical = run == 0;
    for (int i = 0; i < 3; ++i) {
      Rational d = identical && i > 0 ? e.u(0).delta() : Rational(1) - Rational(1, gen::uniform(rng, 162, 400));
      UtilityPtr u = gen::geometric(d);
      if (!identical && gen::coin(rng, 0.3)) {
        do {
          u = gen::perturbed(rng, d, 0, 4, true);
        } while (kakeya_level(*u) < Rational(161));
      }
      e.agents.push_back({"a" + std::to_string(i + 1), u});
    }
    Allocation a = selfridge_conway(e, prec);
    FairnessCertificate c = verify_envy_free(e, a, prec, 300);
    bool ok = c.verdict == Verdict::certified_pass && ledger_ok(a) && c.pairs.size() == 6;
    for (const auto& p : c.pairs) ok = ok && p.gap.lo() >= -prec && (!identical || p.strict);
    five += a.cuts == 5;
    if (!ok) {
      ++failures_here;
      if (first.empty()) first = "run " + std::to_string(run) + " cuts " + std::to_string(a.cuts);
    }
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  return {failures_here == 0 && secs < 120.0, "25 economies (" + std::to_string(five) + " with 5 cuts), " +
                                                  std::to_string(failures_here) + " failures " + first};
}

Outcome bounds() {
  Rational rec = 1;
  bool ok = true;
  for (std::uint64_t c = 1; c <= 1000; ++c) {
    if (c > 1) rec = Rational(3) * rec + Rational(2);
    ok = ok && d_bound(c) == rec;
  }
  ok = ok && d_bound(5) == Rational(161) && p_bound_numeric(1) == Rational(1);
  bool refused = true;
  for (std::uint64_t n : {2, 3, 7}) {
    try {
      p_bound_numeric(n);
      refused = false;
    } catch (const Error& e) {
      refused = refused && e.code() == ErrorCode::tower_too_large;
    }
  }
  return {ok && refused, "d(5)=" + d_bound(5).str() + " p(1)=1, p(n>=2) refused"};
}

Outcome round_robin_contrast() {
  bool ok = true;
  std::string detail;
  for (Rational d : {Rational(1, 10), Rational(1, 2), Rational(5, 6), Rational(199, 200), Rational(999, 1000)}) {
    Economy e;
    e.agents = {{"a1", gen::geometric(d)}, {"a2", gen::geometric(d)}};
    Allocation a = round_robin(e);
    LinearValue v1 = LinearValue::mass(e.agents[0].utility, a.shares[0]);
    LinearValue v2 = LinearValue::mass(e.agents[1].utility, a.shares[1]);
    ok = ok && v1.is_exact() && v2.is_exact() && v1.constant() == Rational(1) / (Rational(1) + d) &&
         v2.constant() == d / (Rational(1) + d);
    FairnessCertificate c = verify_envy_free(e, a, kTol18);
    bool agent2_fails = false;
    for (const auto& p : c.pairs) {
      if (p.i == 1 && p.j == 0) agent2_fails = p.verdict == Verdict::certified_fail;
    }
    ok = ok && agent2_fails && c.verdict == Verdict::certified_fail;
    detail += " " + d.str();
  }
  return {ok, "agent 2 certified envious at delta =" + detail};
}

}  // namespace

int main() {
  report(1, "tripartition trace", tripartition_trace);
  report(2, "ICA stage 1", ica_stage_one);
  report(3, "greedy exactness + remainder", greedy_exactness);
  report(4, "tripartition both-sides floors", tripartition_floors);
  report(5, "dense subsets keep divisibility", dense_cycles);
  report(6, "monotonic reordering", reordering);
  report(7, "proportional end-to-end", proportional_end_to_end);
  report(8, "envy-free n=2", envy_free_two);
  report(9, "envy-free n=3 (Selfridge-Conway)", envy_free_three);
  report(10, "patience bounds", bounds);
  report(11, "round-robin contrast", round_robin_contrast);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
