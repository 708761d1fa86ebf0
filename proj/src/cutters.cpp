#include "slotfair/cutters.hpp"

#include <algorithm>

#include "slotfair/errors.hpp"
#include "slotfair/mass.hpp"
#include "slotfair/residual.hpp"

namespace slotfair {

namespace {

constexpr TimeSlot kEagerSlots = 4096;

class GreedyGen : public SlotGenerator {
 public:
  GreedyGen(UtilityPtr u, Schedule src, LinearValue target)
      : u_(std::move(u)), src_(std::move(src)), target_(std::move(target)) {}

  bool next(TimeSlot t) override {
    if (t == 1) start();
    if (finished_) return false;
    bool take = false;
    if (contains(src_, t)) {
      for (;;) {
        if (lo_.compare_weight() >= 0) {
          take = true;
          break;
        }
        if (exact_ || hi_.compare_weight() < 0) break;
        refine(t);
      }
    }
    if (take) {
      lo_.take();
      if (!exact_) hi_.take();
      sum_.give();
    }
    if (exact_ && lo_.residual_is_zero() && t >= u_->last_adjusted()) {
      finished_ = true;
      return take;
    }
    lo_.advance();
    if (!exact_) hi_.advance();
    sum_.advance();
    return take;
  }

 private:
  void start() {
    exact_ = target_.is_exact();
    sum_ = ResidualTracker(*u_, Rational(0));
    if (exact_) {
      lo_ = ResidualTracker(*u_, target_.constant());
      return;
    }
    RatInterval box = target_.enclose_at(horizon_);
    lo_ = ResidualTracker(*u_, box.lo());
    hi_ = ResidualTracker(*u_, box.hi());
  }

  void refine(TimeSlot t) {
    if (horizon_ >= kMaxHorizon) {
      throw Error(ErrorCode::undecided_at_precision,
                  "greedy decision at slot " + std::to_string(t) + " needs a target beyond slot " +
                      std::to_string(kMaxHorizon));
    }
    horizon_ = std::min(kMaxHorizon, std::max(horizon_ + std::max<TimeSlot>(64, horizon_ / 4), t + 64));
    RatInterval box = target_.enclose_at(horizon_);
    Rational taken = sum_.residual();
    lo_ = ResidualTracker(*u_, box.lo() - taken, t);
    hi_ = ResidualTracker(*u_, box.hi() - taken, t);
  }

  UtilityPtr u_;
  Schedule src_;
  LinearValue target_;
  bool exact_ = true, finished_ = false;
  TimeSlot horizon_ = 64;
  ResidualTracker lo_, hi_, sum_;
};

// The greedy set with no precondition checks; target must lie in [0, u(S)].
Schedule build_greedy(const UtilityPtr& u, const Schedule& s, const LinearValue& v) {
  if (v.is_exact() && v.constant().is_zero()) {
    // Zero-weight members still fit under the target.
    std::vector<TimeSlot> zeros;
    for (const auto& [t, w] : u->adjustments()) {
      if (w.is_zero() && contains(s, t)) zeros.push_back(t);
    }
    return EPSet::finite(zeros);
  }
  if (auto e = as_epset(s); e && v.is_exact()) {
    ResidualTracker res(*u, v.constant());
    std::vector<TimeSlot> taken;
    TimeSlot limit = std::max<TimeSlot>(kEagerSlots, e->threshold() + 64 * e->period());
    for (TimeSlot t = 1; t <= limit; ++t) {
      if (e->contains(t) && res.compare_weight() >= 0) {
        res.take();
        taken.push_back(t);
      }
      if (res.residual_is_zero()) {
        for (TimeSlot z = t + 1; z <= u->last_adjusted(); ++z) {
          if (e->contains(z) && u->raw(z).is_zero()) taken.push_back(z);
        }
        return EPSet::finite(taken);
      }
      res.advance();
    }
  }
  Provenance prov;
  prov.procedure = "greedy";
  prov.params = {{"target", v.str()}, {"utility", u->key()}};
  prov.certified_masses[u->key()] = std::make_shared<const LinearValue>(v);
  return make_lazy(std::make_unique<GreedyGen>(u, s, v), envelope_of(s), std::move(prov));
}

Rational source_level(const UtilityFn& u, const Schedule& s, const std::optional<Rational>& floor) {
  if (auto e = as_epset(s)) {
    ExtendedRational lvl = divisibility_level(u, *e);
    if (lvl.is_infinite()) return floor.value_or(Rational(0));
    return floor ? max(*floor, lvl.value()) : lvl.value();
  }
  if (!floor) {
    throw Error(ErrorCode::precondition_unverified,
                "lazy source carries no divisibility certificate");
  }
  return *floor;
}

void require_decided(Ordering o, const char* what) {
  if (o == Ordering::undecided) {
    throw Error(ErrorCode::undecided_at_precision, std::string("cannot certify ") + what);
  }
}

std::vector<DenseFact> dense3(const Schedule& s) { return {DenseFact{s, 3}}; }

CutResult tripartition_low(const UtilityPtr& u, const Schedule& s, const LinearValue& total,
                           const LinearValue& v) {
  // Smallest r with u(S_[r)) <= 3v, i.e. total - 3v <= value of the first r-1 members.
  LinearValue gap = total - v * Rational(3);
  TimeSlot h = 64;
  RatInterval box = gap.enclose_at(h);
  std::uint64_t r = 1;
  Rational before(0);
  TimeSlot t = 0;
  for (;;) {
    if (box.hi() <= before) break;
    if (box.lo() > before) {
      do {
        ++t;
        if (t > kLazyScanBudget) throw Error(ErrorCode::undecided_at_precision, "rank search ran out");
      } while (!contains(s, t));
      before += u->weight(t);
      ++r;
      continue;
    }
    if (h >= kMaxHorizon) require_decided(Ordering::undecided, "the tripartition rank");
    h = std::min(kMaxHorizon, h + std::max<TimeSlot>(64, h / 4));
    box = gap.enclose_at(h);
  }

  CutResult out;
  out.mode = CutMode::tripartition;
  out.rank = r;
  out.sort = cycle(s, r, 3);
  out.skip = cycle(s, r + 1, 3);
  out.take = cycle(s, r + 2, 3);
  LinearValue take_value = LinearValue::mass(u, *out.take);
  Schedule picked = build_greedy(u, *out.sort, v - take_value);

  Provenance tp;
  tp.procedure = "tripartition";
  tp.params = {{"target", v.str()}, {"rank", std::to_string(r)}, {"utility", u->key()}};
  tp.dense_in = dense3(s);
  out.taken = union_disjoint({*out.take, picked}, tp);
  Provenance rp;
  rp.procedure = "tripartition_remainder";
  rp.dense_in = dense3(s);
  out.remainder = difference_subset(s, out.taken, rp);
  out.taken_value = v;
  return out;
}

}  // namespace

std::string_view cut_mode_name(CutMode m) {
  return m == CutMode::greedy ? "greedy" : "tripartition";
}

std::string_view check_outcome_name(CheckOutcome c) {
  switch (c) {
    case CheckOutcome::pass: return "pass";
    case CheckOutcome::fail: return "fail";
    case CheckOutcome::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ExtendedRational divisibility_level(const UtilityFn& u, const EPSet& s) {
  TimeSlot bound = s.is_infinite()
                       ? std::max(s.threshold(), u.last_adjusted()) + s.period()
                       : (s.empty() ? 0 : s.prefix().back());
  Rational after = mass_exact(u, s);
  ExtendedRational best = ExtendedRational::infinity();
  for (TimeSlot t : s.members_upto(bound)) {
    Rational w = u.weight(t);
    after -= w;
    if (w.sign() > 0) {
      ExtendedRational ratio(after / w);
      if (ratio < best) best = ratio;
    }
  }
  return best;
}

CheckOutcome divisibility_check_lazy(const UtilityPtr& u, const Schedule& s, const Rational& k,
                                     TimeSlot horizon) {
  // Every constraint reads total >= prefix(t) + k·w(t); only the largest matters.
  std::optional<Rational> need;
  Rational prefix(0);
  for (TimeSlot t : prefix_bitmap(s, horizon)) {
    Rational w = u->weight(t);
    prefix += w;
    if (w.sign() > 0) {
      Rational c = prefix + k * w;
      if (!need || c > *need) need = c;
    }
  }
  if (!need) return CheckOutcome::pass;
  switch (compare(LinearValue::mass(u, s), LinearValue(*need))) {
    case Ordering::greater:
    case Ordering::equal: return CheckOutcome::pass;
    case Ordering::less: return CheckOutcome::fail;
    case Ordering::undecided: return CheckOutcome::inconclusive;
  }
  return CheckOutcome::inconclusive;
}

Rational lemma1_bound(const Rational& k, std::uint64_t l) {
  if (l == 0) throw std::invalid_argument("cycle length must be >= 1");
  Rational len(static_cast<long>(l));
  if (len > k + Rational(1)) {
    throw Error(ErrorCode::bound_violation,
                "cycle length " + std::to_string(l) + " exceeds k + 1 = " + (k + Rational(1)).str());
  }
  return (k - (len - Rational(1))) / len;
}

CutResult greedy_cut(const UtilityPtr& u, const Schedule& s, const LinearValue& v,
                     const std::optional<Rational>& floor) {
  Rational level = source_level(*u, s, floor);
  LinearValue total = LinearValue::mass(u, s);
  Ordering low = compare(v, LinearValue(0));
  Ordering high = compare(v, total);
  require_decided(low, "the target's sign");
  require_decided(high, "the target against the source value");
  if (low == Ordering::less || high == Ordering::greater) {
    throw Error(ErrorCode::target_out_of_range, "greedy target " + v.str() + " is outside [0, u(S)]");
  }
  if (level < Rational(1) && low != Ordering::equal) {
    throw Error(ErrorCode::insufficient_divisibility,
                "greedy cut needs a 1-divisible source; level is " + level.str());
  }

  CutResult out;
  out.mode = CutMode::greedy;
  out.taken_value = v;
  out.floor_taken = Rational(0);
  out.floor_remainder = max(Rational(0), level - Rational(1));
  if (high == Ordering::equal) {
    out.taken = s;
    out.remainder = EPSet();
    return out;
  }
  out.taken = build_greedy(u, s, v);
  Provenance rp;
  rp.procedure = "greedy_remainder";
  out.remainder = difference_subset(s, out.taken, rp);
  return out;
}

CutResult tripartition_cut(const UtilityPtr& u, const Schedule& s, const LinearValue& v,
                           const std::optional<Rational>& floor) {
  if (!is_monotonic(*u)) {
    throw Error(ErrorCode::not_monotonic, "tripartition needs a monotone cutter");
  }
  Rational level = source_level(*u, s, floor);
  LinearValue total = LinearValue::mass(u, s);
  Ordering low = compare(v, LinearValue(0));
  Ordering high = compare(v, total);
  require_decided(low, "the target's sign");
  require_decided(high, "the target against the source value");
  if (low != Ordering::greater || high != Ordering::less) {
    throw Error(ErrorCode::target_out_of_range,
                "tripartition target " + v.str() + " is outside (0, u(S))");
  }
  if (level < Rational(5)) {
    throw Error(ErrorCode::insufficient_divisibility,
                "tripartition needs a 5-divisible source; level is " + level.str());
  }

  Ordering half = compare(v, total / Rational(2));
  require_decided(half, "the target against half the source value");
  CutResult out;
  if (half != Ordering::greater) {
    out = tripartition_low(u, s, total, v);
  } else {
    CutResult inner = tripartition_low(u, s, total, total - v);
    Provenance tp;
    tp.procedure = "tripartition";
    tp.params = {{"target", v.str()}, {"rank", std::to_string(inner.rank)}, {"mirrored", "true"}};
    tp.dense_in = dense3(s);
    out = inner;
    out.mirrored = true;
    out.taken = difference_subset(s, inner.taken, tp);
    out.remainder = inner.taken;
    out.taken_value = v;
  }
  out.floor_taken = out.floor_remainder = (level - Rational(2)) / Rational(3);
  return out;
}

}  // namespace slotfair
