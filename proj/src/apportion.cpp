#include "slotfair/apportion.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "slotfair/errors.hpp"
#include "slotfair/linear_value.hpp"
#include "slotfair/residual.hpp"

namespace slotfair {

namespace {

constexpr TimeSlot kLiftBudget = TimeSlot{1} << 22;

// Continues a limit-stage basket past the scanned prefix: add a considered
// slot iff no remaining agent would exceed 1/n.
class LimitBasketGen : public SlotGenerator {
 public:
  LimitBasketGen(EPSet scanned, TimeSlot horizon, Schedule considered,
                 std::vector<UtilityPtr> keep_alive, std::vector<ResidualTracker> trackers)
      : scanned_(std::move(scanned)),
        horizon_(horizon),
        considered_(std::move(considered)),
        keep_alive_(std::move(keep_alive)),
        trackers_(std::move(trackers)) {}

  bool next(TimeSlot t) override {
    if (t <= horizon_) return scanned_.contains(t);
    bool add = false;
    if (contains(considered_, t)) {
      add = std::none_of(trackers_.begin(), trackers_.end(),
                         [](const ResidualTracker& r) { return r.compare_weight() < 0; });
      if (add) {
        for (auto& r : trackers_) r.take();
      }
    }
    for (auto& r : trackers_) r.advance();
    return add;
  }

 private:
  EPSet scanned_;
  TimeSlot horizon_;
  Schedule considered_;
  std::vector<UtilityPtr> keep_alive_;
  std::vector<ResidualTracker> trackers_;
};

void require_monotone_patience(const Economy& e, const Rational& need, bool monotone) {
  for (std::size_t i = 0; i < e.n(); ++i) {
    if (monotone && !is_monotonic(e.u(i))) {
      throw Error(ErrorCode::not_monotonic, "agent " + e.agents[i].name + " is not monotone");
    }
    Rational k = kakeya_level(e.u(i));
    if (k < need) {
      throw Error(ErrorCode::insufficient_patience,
                  "agent " + e.agents[i].name + " has Kakeya level " + k.str() + " < " + need.str());
    }
  }
}

PartitionEvidence evidence_for(const std::vector<Schedule>& shares) {
  for (const auto& s : shares) {
    if (!as_epset(s)) return PartitionEvidence::structural;
  }
  return PartitionEvidence::exact;
}

struct StageOutcome {
  Schedule basket;
  std::size_t recipient;  // position in `remaining`
  StageTrace trace;
};

StageOutcome run_stage(const Economy& e, const std::vector<std::size_t>& remaining,
                       const Schedule& considered, const Rational& precision) {
  const std::size_t n = e.n();
  const Rational share = Rational(1) / Rational(static_cast<long>(n));
  std::vector<ResidualTracker> res;
  TimeSlot need = 1;
  for (std::size_t i : remaining) {
    res.emplace_back(e.u(i), share);
    need = std::max(need, e.u(i).horizon_for(precision));
  }

  StageOutcome out;
  out.trace.considered = considered;
  out.trace.remaining = remaining;
  std::vector<TimeSlot> basket;
  for (TimeSlot t = 1;; ++t) {
    if (t > kMaxHorizon) {
      throw Error(ErrorCode::undecided_at_precision, "apportionment stage did not settle");
    }
    if (contains(considered, t)) {
      FlagEvent ev{t, {}, ""};
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        if (res[k].compare_weight() < 0) ev.flags.push_back(remaining[k]);
      }
      if (ev.flags.size() <= 1) {
        basket.push_back(t);
        for (auto& r : res) r.take();
      }
      ev.action = ev.flags.empty() ? "added" : (ev.flags.size() == 1 ? "assigned" : "skipped");
      out.trace.events.push_back(ev);
      if (ev.flags.size() == 1) {
        EPSet b = EPSet::finite(basket);
        out.basket = b;
        out.recipient = static_cast<std::size_t>(
            std::find(remaining.begin(), remaining.end(), ev.flags.front()) - remaining.begin());
        out.trace.mode = "single_flag";
        out.trace.scanned_to = t;
        for (std::size_t i : remaining) out.trace.values.push_back(RatInterval::point(mass_exact(e.u(i), b)));
        return out;
      }
    }
    for (auto& r : res) r.advance();
    if (t >= need && t % 16 == 0) {
      bool near = std::any_of(res.begin(), res.end(),
                              [&](const ResidualTracker& r) { return r.residual() <= precision; });
      if (!near) continue;
      // Limit stage: basket values lie in [b_i, min(1/n, b_i + tail_i(t))].
      std::size_t best = 0;
      std::vector<Rational> lo;
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        lo.push_back(share - res[k].residual());
        const UtilityFn& u = e.u(remaining[k]);
        out.trace.values.emplace_back(lo[k], min(share, lo[k] + u.tail_after(t)));
        if (lo[k] > lo[best]) best = k;
      }
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        if (k != best && out.trace.values[k].hi() >= lo[best]) out.trace.tie = true;
      }
      std::vector<UtilityPtr> keep;
      bool identical = true;
      for (std::size_t i : remaining) {
        keep.push_back(e.agents[i].utility);
        identical = identical && e.u(i).key() == e.u(remaining.front()).key();
      }
      Provenance prov;
      prov.procedure = "apportionment_limit_basket";
      prov.params = {{"scanned_to", std::to_string(t)}};
      if (identical) {
        // Everyone flags together, so the basket is the greedy set for 1/n.
        prov.certified_masses[keep.front()->key()] = std::make_shared<const LinearValue>(share);
      }
      out.basket = make_lazy(std::make_unique<LimitBasketGen>(EPSet::finite(basket), t, considered,
                                                              std::move(keep), std::move(res)),
                             envelope_of(considered), std::move(prov));
      out.recipient = best;
      out.trace.mode = "limit";
      out.trace.scanned_to = t;
      return out;
    }
  }
}

// Shared pick simulation behind the lifted shares.
class LiftSimulation {
 public:
  LiftSimulation(const Economy& e, std::vector<Schedule> reordered_shares)
      : e_(e), shares_(std::move(reordered_shares)) {
    for (std::size_t i = 0; i < e.n(); ++i) {
      AgentState a;
      const UtilityFn& u = e.u(i);
      a.last = u.last_adjusted();
      a.next_free = a.last + 1;
      for (TimeSlot s = 1; s <= a.last; ++s) a.head.push_back(u.weight(s));
      for (TimeSlot s = 1; s <= a.last; ++s) a.cross.push_back(crossing(u, a.head[s - 1]));
      if (auto ep = as_epset(shares_[i]); ep && !ep->is_infinite()) {
        a.final_pick = ep->empty() ? 0 : ep->prefix().back();
      }
      agents_.push_back(std::move(a));
    }
  }

  std::size_t owner_of(TimeSlot s) {
    std::lock_guard lock(mutex_);
    if (s < owner_.size() && owner_[s] >= 0) return static_cast<std::size_t>(owner_[s]);
    while (true) {
      if (s < owner_.size() && owner_[s] >= 0) return static_cast<std::size_t>(owner_[s]);
      if (never_picked(s)) return 0;
      if (step_ > s + kLiftBudget) {
        throw Error(ErrorCode::undecided_at_precision,
                    "lift simulation could not settle slot " + std::to_string(s));
      }
      step();
    }
  }

 private:
  struct AgentState {
    TimeSlot last = 0;
    std::vector<Rational> head;     // weights of slots 1..last
    std::vector<TimeSlot> cross;    // first t > last with weight(t) <= head[s-1]
    TimeSlot next_free = 1;         // earliest possibly-unpicked slot > last
    std::optional<TimeSlot> final_pick;  // finite share: no picks after this step
  };

  static TimeSlot crossing(const UtilityFn& u, const Rational& w) {
    TimeSlot first = u.last_adjusted() + 1;
    if (w.is_zero()) return ~TimeSlot{0};
    if (u.weight(first) <= w) return first;
    double guess = first + std::log(w.to_double() / u.weight(first).to_double()) /
                               std::log(u.delta().to_double());
    TimeSlot t = std::max<TimeSlot>(first, static_cast<TimeSlot>(std::max(0.0, guess)));
    while (t > first && u.weight(t - 1) <= w) --t;
    while (u.weight(t) > w) ++t;
    return t;
  }

  bool picked(TimeSlot s) const { return s < owner_.size() && owner_[s] >= 0; }

  bool never_picked(TimeSlot s) const {
    for (std::size_t i = 0; i < e_.n(); ++i) {
      if (e_.u(i).raw(s).is_zero()) continue;
      const auto& a = agents_[i];
      if (!a.final_pick || step_ < *a.final_pick) return false;
    }
    return true;
  }

  void step() {
    TimeSlot tau = ++step_;
    std::size_t who = e_.n();
    for (std::size_t i = 0; i < shares_.size(); ++i) {
      if (contains(shares_[i], tau)) {
        who = i;
        break;
      }
    }
    if (who == e_.n()) throw std::logic_error("reordered shares do not cover slot " + std::to_string(tau));
    AgentState& a = agents_[who];
    while (picked(a.next_free)) ++a.next_free;
    TimeSlot best = 0;
    for (TimeSlot s = 1; s <= a.last; ++s) {
      if (picked(s) || a.head[s - 1].is_zero()) continue;
      if (best == 0 || a.head[s - 1] > a.head[best - 1]) best = s;
    }
    TimeSlot f = (best != 0 && a.next_free >= a.cross[best - 1]) ? best : a.next_free;
    if (owner_.size() <= f) owner_.resize(f + 1, -1);
    owner_[f] = static_cast<long>(who);
  }

  Economy e_;
  std::vector<Schedule> shares_;
  std::vector<AgentState> agents_;
  std::vector<long> owner_;  // slot -> agent, -1 while unpicked
  TimeSlot step_ = 0;
  std::mutex mutex_;
};

class LiftGen : public SlotGenerator {
 public:
  LiftGen(std::shared_ptr<LiftSimulation> sim, std::size_t agent) : sim_(std::move(sim)), agent_(agent) {}
  bool next(TimeSlot t) override { return sim_->owner_of(t) == agent_; }

 private:
  std::shared_ptr<LiftSimulation> sim_;
  std::size_t agent_;
};

}  // namespace

Economy reordered_economy(const Economy& e) {
  Economy out;
  for (const auto& a : e.agents) {
    out.agents.push_back({a.name, std::make_shared<const UtilityFn>(monotonic_reordering(*a.utility).utility)});
  }
  return out;
}

Allocation ica_allocate(const Economy& e, const Rational& precision) {
  e.validate();
  const std::size_t n = e.n();
  Allocation alloc;
  alloc.method = "ica";
  if (n == 1) {
    alloc.shares = {EPSet::all()};
    alloc.evidence = PartitionEvidence::exact;
    return alloc;
  }
  require_monotone_patience(e, Rational(static_cast<long>(2 * n - 3)), true);

  alloc.shares.assign(n, EPSet());
  std::vector<std::size_t> remaining(n);
  for (std::size_t i = 0; i < n; ++i) remaining[i] = i;
  Schedule rest = EPSet::all();
  EPSet reserve;
  for (std::size_t stage = 1; stage < n; ++stage) {
    reserve = set_union(reserve, EPSet::all().cycle(stage, n - 1));
    Schedule considered = schedule_intersection(rest, reserve);
    StageOutcome out = run_stage(e, remaining, considered, precision);
    std::size_t agent = remaining[out.recipient];
    out.trace.stage = stage;
    out.trace.recipient = agent;
    out.trace.assigned = out.basket;
    alloc.shares[agent] = out.basket;
    Provenance prov;
    prov.procedure = "apportionment_rest";
    rest = difference_subset(rest, out.basket, prov);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(out.recipient));
    alloc.trace.push_back(std::move(out.trace));
  }
  StageTrace last;
  last.stage = n;
  last.remaining = remaining;
  last.recipient = remaining.front();
  last.assigned = rest;
  last.considered = rest;
  last.mode = "final";
  alloc.trace.push_back(last);
  alloc.shares[remaining.front()] = rest;
  alloc.evidence = evidence_for(alloc.shares);
  return alloc;
}

Allocation lemma3_lift(const Economy& e, const Economy& reordered, const Allocation& alloc) {
  if (e.n() != reordered.n() || alloc.shares.size() != e.n()) {
    throw Error(ErrorCode::not_a_reordering, "economy sizes do not match");
  }
  bool all_monotone = true;
  for (std::size_t i = 0; i < e.n(); ++i) {
    if (monotonic_reordering(e.u(i)).utility.key() != reordered.u(i).key()) {
      throw Error(ErrorCode::not_a_reordering,
                  "agent " + e.agents[i].name + "'s reordered utility does not match");
    }
    all_monotone = all_monotone && is_monotonic(e.u(i));
  }
  Allocation out = alloc;
  if (all_monotone) return out;
  auto sim = std::make_shared<LiftSimulation>(e, alloc.shares);
  for (std::size_t i = 0; i < e.n(); ++i) {
    Provenance prov;
    prov.procedure = "lift";
    prov.params = {{"agent", e.agents[i].name}};
    out.shares[i] = make_lazy(std::make_unique<LiftGen>(sim, i), std::nullopt, std::move(prov));
  }
  out.evidence = PartitionEvidence::structural;
  out.notes.push_back("shares lifted from the reordered economy by favourite-slot picks");
  return out;
}

Allocation proportional_allocate(const Economy& e, const Rational& precision) {
  e.validate();
  const std::size_t n = e.n();
  if (n == 1) {
    Allocation a;
    a.method = "proportional";
    a.shares = {EPSet::all()};
    a.evidence = PartitionEvidence::exact;
    return a;
  }
  require_monotone_patience(e, Rational(static_cast<long>(2 * n - 3)), false);
  Economy m = reordered_economy(e);
  Allocation inner = ica_allocate(m, precision);
  Allocation out = lemma3_lift(e, m, inner);
  out.method = "proportional";
  return out;
}

Allocation round_robin(const Economy& e) {
  e.validate();
  Allocation a;
  a.method = "round-robin";
  for (std::size_t p = 1; p <= e.n(); ++p) a.shares.push_back(EPSet::all().cycle(p, e.n()));
  a.evidence = PartitionEvidence::exact;
  return a;
}

FairnessCertificate verify_proportional(const Economy& e, const Allocation& a,
                                        const Rational& precision, TimeSlot horizon) {
  if (a.shares.size() != e.n()) {
    throw Error(ErrorCode::schema_mismatch, "allocation has " + std::to_string(a.shares.size()) +
                                                " shares for " + std::to_string(e.n()) + " agents");
  }
  FairnessCertificate cert;
  cert.property = "proportional";
  cert.precision = precision;
  Rational share = Rational(1) / Rational(static_cast<long>(e.n()));
  bool all_pass = true, any_fail = false;
  for (std::size_t i = 0; i < e.n(); ++i) {
    AgentCheck c;
    c.agent = i;
    c.threshold = share;
    LinearValue v = LinearValue::mass(e.agents[i].utility, a.shares[i]);
    // Stop refining once the comparison is certified or the width is within precision.
    compare(v, LinearValue(share), kMaxHorizon, precision);
    c.value = v.is_exact() ? RatInterval::point(v.constant()) : v.enclose(precision);
    RatInterval gap = c.value - RatInterval::point(share);
    c.verdict = classify(gap, precision);
    c.strict = gap.lo().sign() >= 0;
    all_pass = all_pass && c.verdict == Verdict::certified_pass;
    any_fail = any_fail || c.verdict == Verdict::certified_fail;
    cert.agents.push_back(c);
  }
  cert.partition = audit_partition(a.shares, horizon);
  if (!cert.partition.ok) any_fail = true;
  cert.verdict = any_fail ? Verdict::certified_fail
                          : (all_pass ? Verdict::certified_pass : Verdict::undecided);
  return cert;
}

}  // namespace slotfair
