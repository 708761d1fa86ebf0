#include "slotfair/schedule.hpp"

#include <stdexcept>

#include "slotfair/errors.hpp"

namespace slotfair {

namespace {

class CycleGen : public SlotGenerator {
 public:
  CycleGen(Schedule src, std::uint64_t r, std::uint64_t l) : src_(std::move(src)), r_(r), l_(l) {}
  bool next(TimeSlot t) override {
    if (!contains(src_, t)) return false;
    ++rank_;
    return rank_ >= r_ && (rank_ - r_) % l_ == 0;
  }

 private:
  Schedule src_;
  std::uint64_t r_, l_, rank_ = 0;
};

class BinaryGen : public SlotGenerator {
 public:
  BinaryGen(BoolOp op, Schedule a, Schedule b) : op_(op), a_(std::move(a)), b_(std::move(b)) {}
  bool next(TimeSlot t) override {
    bool x = contains(a_, t);
    switch (op_) {
      case BoolOp::union_: return x || contains(b_, t);
      case BoolOp::intersect: return x && contains(b_, t);
      case BoolOp::difference: return x && !contains(b_, t);
    }
    return false;
  }

 private:
  BoolOp op_;
  Schedule a_, b_;
};

class UnionGen : public SlotGenerator {
 public:
  explicit UnionGen(std::vector<Schedule> parts) : parts_(std::move(parts)) {}
  bool next(TimeSlot t) override {
    for (const auto& p : parts_) {
      if (contains(p, t)) return true;
    }
    return false;
  }

 private:
  std::vector<Schedule> parts_;
};

std::optional<EPSet> envelope_op(BoolOp op, const Schedule& a, const Schedule& b) {
  auto ea = envelope_of(a);
  auto eb = envelope_of(b);
  switch (op) {
    case BoolOp::union_:
      if (ea && eb) return set_union(*ea, *eb);
      return std::nullopt;
    case BoolOp::intersect:
      if (ea && eb) return set_intersection(*ea, *eb);
      return ea ? ea : eb;
    case BoolOp::difference:
      if (ea && as_epset(b)) return set_difference(*ea, *as_epset(b));
      return ea;
  }
  return std::nullopt;
}

Schedule binary(BoolOp op, const Schedule& a, const Schedule& b, const char* name) {
  if (auto x = as_epset(a)) {
    if (auto y = as_epset(b)) return boolean(op, *x, *y);
  }
  Provenance prov;
  prov.procedure = name;
  return make_lazy(std::make_unique<BinaryGen>(op, a, b), envelope_op(op, a, b), std::move(prov));
}

}  // namespace

bool contains(const Schedule& s, TimeSlot t) {
  if (auto e = as_epset(s)) return e->contains(t);
  return std::get<LazyPtr>(s)->contains(t);
}

std::vector<TimeSlot> prefix_bitmap(const Schedule& s, TimeSlot horizon) {
  if (auto e = as_epset(s)) return e->members_upto(horizon);
  return std::get<LazyPtr>(s)->members_upto(horizon);
}

std::optional<EPSet> envelope_of(const Schedule& s) {
  if (auto e = as_epset(s)) return *e;
  return std::get<LazyPtr>(s)->envelope();
}

TimeSlot tau(const Schedule& s, std::uint64_t r) {
  if (r == 0) throw std::invalid_argument("ranks start at 1");
  if (auto e = as_epset(s)) return e->tau(r);
  const auto& lazy = *std::get<LazyPtr>(s);
  TimeSlot limit = kLazyScanBudget;
  if (lazy.envelope() && !lazy.envelope()->is_infinite()) {
    if (lazy.envelope()->size() < r) {
      throw Error(ErrorCode::rank_out_of_range, "rank exceeds the envelope size");
    }
    limit = lazy.envelope()->prefix().back();
  }
  if (lazy.known_limit()) limit = std::min(limit, *lazy.known_limit());
  std::uint64_t seen = 0;
  for (TimeSlot t = 1; t <= limit; ++t) {
    if (lazy.contains(t) && ++seen == r) return t;
  }
  if (lazy.envelope() && !lazy.envelope()->is_infinite()) {
    throw Error(ErrorCode::rank_out_of_range, "rank " + std::to_string(r) + " exceeds set size");
  }
  throw Error(ErrorCode::undecided_at_precision,
              "rank " + std::to_string(r) + " not reached within the scan budget");
}

Schedule tail(const Schedule& s, std::uint64_t r) { return cycle(s, r, 1); }

Schedule cycle(const Schedule& s, std::uint64_t r, std::uint64_t l) {
  if (l == 0) throw std::invalid_argument("cycle length must be >= 1");
  if (r == 0) throw std::invalid_argument("ranks start at 1");
  if (auto e = as_epset(s)) return e->cycle(r, l);
  Provenance prov;
  prov.procedure = "cycle";
  prov.params = {{"r", std::to_string(r)}, {"l", std::to_string(l)}};
  return make_lazy(std::make_unique<CycleGen>(s, r, l), envelope_of(s), std::move(prov));
}

Schedule schedule_union(const Schedule& a, const Schedule& b) {
  return binary(BoolOp::union_, a, b, "union");
}
Schedule schedule_intersection(const Schedule& a, const Schedule& b) {
  return binary(BoolOp::intersect, a, b, "intersection");
}
Schedule schedule_difference(const Schedule& a, const Schedule& b) {
  return binary(BoolOp::difference, a, b, "difference");
}

Schedule union_disjoint(const std::vector<Schedule>& parts, Provenance prov) {
  if (parts.empty()) return EPSet();
  if (parts.size() == 1) return parts.front();
  bool all_closed = true;
  for (const auto& p : parts) all_closed = all_closed && as_epset(p);
  if (all_closed) {
    EPSet acc;
    for (const auto& p : parts) acc = set_union(acc, *as_epset(p));
    return acc;
  }
  std::optional<EPSet> env = EPSet();
  for (const auto& p : parts) {
    auto e = envelope_of(p);
    if (!e) {
      env.reset();
      break;
    }
    env = set_union(*env, *e);
  }
  if (prov.procedure.empty()) prov.procedure = "union";
  prov.disjoint_parts = parts;
  return make_lazy(std::make_unique<UnionGen>(parts), std::move(env), std::move(prov));
}

Schedule difference_subset(const Schedule& a, const Schedule& b, Provenance prov) {
  if (auto x = as_epset(a)) {
    if (auto y = as_epset(b)) return set_difference(*x, *y);
  }
  if (prov.procedure.empty()) prov.procedure = "difference";
  prov.difference_of = std::make_pair(a, b);
  return make_lazy(std::make_unique<BinaryGen>(BoolOp::difference, a, b),
                   envelope_op(BoolOp::difference, a, b), std::move(prov));
}

bool same_schedule(const Schedule& a, const Schedule& b) {
  if (a.index() != b.index()) return false;
  if (auto x = as_epset(a)) return *x == *as_epset(b);
  return std::get<LazyPtr>(a) == std::get<LazyPtr>(b);
}

std::optional<bool> is_dense(const Schedule& sstar, const EPSet& s, std::uint64_t l) {
  if (l == 0) throw std::invalid_argument("cycle length must be >= 1");
  if (!s.is_infinite()) throw std::invalid_argument("ambient set must be infinite");
  if (auto e = as_epset(sstar)) {
    if (!is_subset(*e, s)) throw Error(ErrorCode::not_a_subset, "schedule is not inside S");
    if (e->empty()) return false;
    std::uint64_t rstar = s.count_upto(e->tau(1));
    for (std::uint64_t off = 0; off < l; ++off) {
      if (is_subset(s.cycle(rstar + off, l), *e)) return true;
    }
    return false;
  }
  for (const auto& fact : std::get<LazyPtr>(sstar)->provenance().dense_in) {
    auto amb = as_epset(fact.ambient);
    if (amb && *amb == s && l % fact.length == 0) return true;
  }
  return std::nullopt;
}

std::string describe(const Schedule& s) {
  if (auto e = as_epset(s)) return e->str();
  const auto& lazy = *std::get<LazyPtr>(s);
  std::string out = lazy.provenance().procedure + "{";
  auto m = lazy.members_upto(std::min<TimeSlot>(lazy.computed_to(), 24));
  for (std::size_t i = 0; i < m.size(); ++i) out += (i ? "," : "") + std::to_string(m[i]);
  return out + ",...}";
}

}  // namespace slotfair
