#include "slotfair/envyfree.hpp"

#include <cmath>
#include <stdexcept>

#include "slotfair/errors.hpp"
#include "slotfair/linear_value.hpp"
#include "slotfair/mass.hpp"

namespace slotfair {

PartitionState PartitionState::whole(std::size_t agents, const Rational& floor) {
  PartitionState s;
  s.pieces = {EPSet::all()};
  s.names = {"T"};
  s.floors = {std::vector<Rational>(agents, floor)};
  return s;
}

std::size_t PartitionState::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw std::out_of_range("no piece named " + name);
}

RatInterval rw_evaluate(const UtilityPtr& u, const Schedule& piece, const Rational& precision) {
  return mass_interval(u, piece, precision);
}

RwCut rw_cut(PartitionState& state, const Economy& e, std::size_t agent, std::size_t piece,
             const LinearValue& v, CutMode mode, const std::string& taken_name,
             const std::string& remainder_name) {
  const Rational& floor = state.floors.at(piece).at(agent);
  const Rational need = mode == CutMode::tripartition ? Rational(5) : Rational(1);
  if (floor < need) {
    throw Error(ErrorCode::insufficient_divisibility,
                std::string(cut_mode_name(mode)) + " cut on " + state.names[piece] + " needs floor " +
                    need.str() + ", ledger has " + floor.str());
  }
  const UtilityPtr& u = e.agents.at(agent).utility;
  LinearValue total = LinearValue::mass(u, state.pieces[piece]);
  Ordering lo = compare(v, LinearValue(Rational(0)));
  Ordering hi = compare(v, total);
  if (lo == Ordering::less || hi == Ordering::greater) {
    throw Error(ErrorCode::target_out_of_range,
                "target " + v.str() + " outside [0, " + total.str() + "]");
  }
  RwCut out;
  if (lo == Ordering::equal) {
    out.remainder = piece;
    return out;
  }
  if (hi == Ordering::equal) {
    out.taken = piece;
    return out;
  }
  CutResult r = mode == CutMode::tripartition ? tripartition_cut(u, state.pieces[piece], v, floor)
                                              : greedy_cut(u, state.pieces[piece], v, floor);
  std::vector<Rational> taken_floors, rest_floors;
  for (const Rational& k : state.floors[piece]) {
    if (mode == CutMode::tripartition) {
      Rational child = (k - Rational(2)) / Rational(3);
      taken_floors.push_back(child);
      rest_floors.push_back(child);
    } else {
      taken_floors.push_back(Rational(0));
      rest_floors.push_back(max(Rational(0), k - Rational(1)));
    }
  }
  state.pieces[piece] = r.taken;
  state.names[piece] = taken_name;
  state.floors[piece] = std::move(taken_floors);
  state.pieces.push_back(r.remainder);
  state.names.push_back(remainder_name);
  state.floors.push_back(std::move(rest_floors));
  ++state.cuts;
  out.taken = piece;
  out.remainder = state.pieces.size() - 1;
  out.result = std::move(r);
  return out;
}

Rational d_bound(std::uint64_t c) {
  if (c == 0) throw std::invalid_argument("d(c) needs c >= 1");
  return Rational(2) * rat_pow(Rational(3), c - 1) - Rational(1);
}

std::uint64_t d_bound_digits(std::uint64_t c) {
  if (c == 0) throw std::invalid_argument("d(c) needs c >= 1");
  if (c <= 20000) return d_bound(c).numerator().get_str().size();
  // 2·3^(c-1) - 1 never sits on a power of ten, so the log gives the count.
  long double lg = static_cast<long double>(c - 1) * std::log10(3.0L) + std::log10(2.0L);
  return static_cast<std::uint64_t>(std::floor(lg)) + 1;
}

namespace {

constexpr int kTowerHeight = 6;

// Level h of n^n^...^n (h copies), numeric while it stays below 2^64.
std::string tower(std::uint64_t n, std::optional<mpz_class>* numeric) {
  mpz_class value = n;
  std::string text = std::to_string(n);
  bool exact = true;
  for (int h = 2; h <= kTowerHeight; ++h) {
    if (exact) {
      double bits = value.get_d() * std::log2(static_cast<double>(n));
      if (n <= 1 || bits < 64) {
        mpz_class next;
        mpz_pow_ui(next.get_mpz_t(), mpz_class(n).get_mpz_t(), value.get_ui());
        value = next;
        text = value.get_str();
        continue;
      }
      exact = false;
    }
    bool wrap = text.find('^') != std::string::npos;
    text = std::to_string(n) + "^" + (wrap ? "(" + text + ")" : text);
  }
  if (exact) *numeric = value;
  return text;
}

}  // namespace

PatienceBound p_bound(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("p(n) needs n >= 1");
  PatienceBound b;
  b.agents = n;
  std::optional<mpz_class> c;
  b.cuts = tower(n, &c);
  b.divisibility = "2·3^(" + b.cuts + "−1) − 1";
  if (n == 1) b.numeric = d_bound(c->get_ui());
  return b;
}

Rational p_bound_numeric(std::uint64_t n) {
  PatienceBound b = p_bound(n);
  if (!b.numeric) {
    throw Error(ErrorCode::tower_too_large, "p(" + std::to_string(n) + ") = d(" + b.cuts + ") has no numeric form");
  }
  return *b.numeric;
}

namespace {

void require_patience(const Economy& e, const Rational& need, bool monotone) {
  for (std::size_t i = 0; i < e.n(); ++i) {
    Rational k = kakeya_level(e.u(i));
    if (k < need) {
      throw Error(ErrorCode::insufficient_patience,
                  "agent " + e.agents[i].name + " has Kakeya level " + k.str() + " < " + need.str());
    }
    if (monotone && !is_monotonic(e.u(i))) {
      throw Error(ErrorCode::not_monotonic, "agent " + e.agents[i].name + " is not monotone");
    }
  }
}

// Queries and choices of one protocol run.
class Protocol {
 public:
  Protocol(const Economy& e, const Rational& precision, Allocation& log)
      : e_(e), precision_(precision), log_(log) {}

  LinearValue evaluate(std::size_t agent, const PartitionState& st, std::size_t piece) {
    LinearValue v = LinearValue::mass(e_.agents[agent].utility, st.pieces[piece]);
    RatInterval box = v.is_exact() ? RatInterval::point(v.constant()) : v.enclose(precision_);
    log_.queries.push_back({"evaluate", agent, st.names[piece], "", box.str()});
    return v;
  }

  RwCut cut(PartitionState& st, std::size_t agent, std::size_t piece, const LinearValue& v, CutMode mode,
            const std::string& taken, const std::string& rest) {
    std::string name = st.names[piece];
    Rational before = st.floors[piece][agent];
    RwCut c = rw_cut(st, e_, agent, piece, v, mode, taken, rest);
    std::string result;
    if (c.result) {
      ++log_.cuts;
      log_.ledger.push_back({log_.cuts, name, std::string(cut_mode_name(mode)), before,
                             st.floors[*c.taken][agent]});
      result = taken + "," + rest;
    } else {
      result = c.taken ? "whole" : "empty";
    }
    log_.queries.push_back({"cut", agent, name, v.str(), result});
    return c;
  }

  // Agent's favourite among `options` (piece indices); lowest position wins
  // unless another is certified larger.
  std::size_t favourite(std::size_t agent, const PartitionState& st, const std::vector<std::size_t>& options) {
    std::vector<LinearValue> vals;
    for (std::size_t p : options) vals.push_back(evaluate(agent, st, p));
    std::size_t best = 0;
    for (std::size_t k = 1; k < options.size(); ++k) {
      Ordering o = decide(vals[k], vals[best]);
      if (o == Ordering::greater) best = k;
    }
    return best;
  }

  // Certified order, refined once more at precision² before giving up.
  Ordering decide(const LinearValue& a, const LinearValue& b) {
    Ordering o = compare(a, b, kMaxHorizon, precision_);
    if (o != Ordering::undecided) return o;
    o = compare(a, b, kMaxHorizon, precision_ * precision_);
    if (o == Ordering::undecided) {
      log_.notes.push_back("undecided comparison " + a.str() + " vs " + b.str() + "; treated as a tie");
    }
    return o;
  }

 private:
  const Economy& e_;
  Rational precision_;
  Allocation& log_;
};

PartitionEvidence evidence_of(const std::vector<Schedule>& shares) {
  for (const auto& s : shares) {
    if (!as_epset(s)) return PartitionEvidence::structural;
  }
  return PartitionEvidence::exact;
}

}  // namespace

Allocation divide_and_choose(const Economy& e, const Rational& precision) {
  e.validate();
  if (e.n() != 2) throw std::invalid_argument("divide and choose needs exactly 2 agents");
  require_patience(e, Rational(1), false);
  Allocation a;
  a.method = "divide-choose";
  Protocol proto(e, precision, a);
  PartitionState st = PartitionState::whole(2, kakeya_level(e.u(0)));
  RwCut c = proto.cut(st, 0, 0, LinearValue(Rational(1, 2)), CutMode::greedy, "L", "R");
  std::vector<std::size_t> pieces = {*c.taken, *c.remainder};
  std::size_t pick = proto.favourite(1, st, pieces);
  a.shares.resize(2);
  a.shares[1] = st.pieces[pieces[pick]];
  a.shares[0] = st.pieces[pieces[1 - pick]];
  a.evidence = evidence_of(a.shares);
  return a;
}

Allocation selfridge_conway(const Economy& e, const Rational& precision) {
  e.validate();
  if (e.n() != 3) throw std::invalid_argument("Selfridge-Conway needs exactly 3 agents");
  const Rational start = d_bound(5);
  require_patience(e, start, true);
  Allocation a;
  a.method = "selfridge-conway";
  Protocol proto(e, precision, a);
  PartitionState st = PartitionState::whole(3, start);

  // Agent 1 splits T into three pieces worth exactly 1/3 each to them.
  RwCut c1 = proto.cut(st, 0, 0, LinearValue(Rational(1, 3)), CutMode::tripartition, "P1", "R1");
  LinearValue rest = proto.evaluate(0, st, *c1.remainder);
  RwCut c2 = proto.cut(st, 0, *c1.remainder, rest / Rational(2), CutMode::tripartition, "P2", "P3");
  std::vector<std::size_t> main = {*c1.taken, *c2.taken, *c2.remainder};

  // Agent 2 trims their largest piece down to their second largest.
  std::vector<LinearValue> v2;
  for (std::size_t p : main) v2.push_back(proto.evaluate(1, st, p));
  std::size_t largest = 0;
  for (std::size_t k = 1; k < 3; ++k) {
    if (proto.decide(v2[k], v2[largest]) == Ordering::greater) largest = k;
  }
  std::size_t second = largest == 0 ? 1 : 0;
  for (std::size_t k = 0; k < 3; ++k) {
    if (k != largest && k != second && proto.decide(v2[k], v2[second]) == Ordering::greater) second = k;
  }
  LinearValue trim = v2[largest] - v2[second];
  std::optional<std::size_t> trimmed, trimmings;
  if (proto.decide(trim, LinearValue(Rational(0))) == Ordering::greater) {
    std::string name = st.names[main[largest]];
    RwCut c3 = proto.cut(st, 1, main[largest], trim, CutMode::tripartition, "E", name + "'");
    trimmings = *c3.taken;
    trimmed = *c3.remainder;
    main[largest] = *trimmed;
  } else {
    a.notes.push_back("agent 2's two largest pieces tie; no trim");
  }

  std::vector<std::vector<std::size_t>> owned(3);
  std::vector<std::size_t> left = main;
  auto give = [&](std::size_t agent, std::size_t pos) {
    owned[agent].push_back(left[pos]);
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(pos));
  };
  give(2, proto.favourite(2, st, left));
  std::size_t forced = left.size();
  for (std::size_t k = 0; k < left.size(); ++k) {
    if (trimmed && left[k] == *trimmed) forced = k;
  }
  give(1, forced < left.size() ? forced : proto.favourite(1, st, left));
  give(0, 0);

  if (trimmings) {
    std::size_t holder = owned[1].front() == *trimmed ? 1 : 2;
    std::size_t divider = holder == 1 ? 2 : 1;
    LinearValue third = proto.evaluate(divider, st, *trimmings) / Rational(3);
    RwCut c4 = proto.cut(st, divider, *trimmings, third, CutMode::tripartition, "E1", "E23");
    RwCut c5 = proto.cut(st, divider, *c4.remainder, third, CutMode::greedy, "E2", "E3");
    left = {*c4.taken, *c5.taken, *c5.remainder};
    give(holder, proto.favourite(holder, st, left));
    give(0, proto.favourite(0, st, left));
    give(divider, 0);
  }

  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<Schedule> parts;
    for (std::size_t p : owned[i]) parts.push_back(st.pieces[p]);
    Provenance prov;
    prov.procedure = "selfridge_conway_share";
    prov.params = {{"agent", e.agents[i].name}};
    a.shares.push_back(parts.size() == 1 ? parts.front() : union_disjoint(parts, prov));
  }
  a.evidence = evidence_of(a.shares);
  return a;
}

FairnessCertificate verify_envy_free(const Economy& e, const Allocation& a, const Rational& precision,
                                     TimeSlot horizon) {
  if (a.shares.size() != e.n()) {
    throw Error(ErrorCode::schema_mismatch, "allocation has " + std::to_string(a.shares.size()) +
                                                " shares for " + std::to_string(e.n()) + " agents");
  }
  FairnessCertificate cert;
  cert.property = "envy-free";
  cert.precision = precision;
  auto box = [&](const LinearValue& v) {
    return v.is_exact() ? RatInterval::point(v.constant()) : v.enclose(precision);
  };
  bool all_pass = true, any_fail = false;
  for (std::size_t i = 0; i < e.n(); ++i) {
    const UtilityPtr& u = e.agents[i].utility;
    LinearValue own = LinearValue::mass(u, a.shares[i]);
    for (std::size_t j = 0; j < e.n(); ++j) {
      if (i == j) continue;
      PairCheck c;
      c.i = i;
      c.j = j;
      LinearValue other = LinearValue::mass(u, a.shares[j]);
      LinearValue gap = own - other;
      compare(gap, LinearValue(Rational(0)), kMaxHorizon, precision);
      c.own = box(own);
      c.other = box(other);
      c.gap = box(gap);
      c.verdict = classify(c.gap, precision);
      c.strict = c.gap.lo().sign() >= 0;
      all_pass = all_pass && c.verdict == Verdict::certified_pass;
      any_fail = any_fail || c.verdict == Verdict::certified_fail;
      cert.pairs.push_back(c);
    }
  }
  cert.partition = audit_partition(a.shares, horizon);
  if (!cert.partition.ok) any_fail = true;
  cert.verdict = any_fail ? Verdict::certified_fail
                          : (all_pass ? Verdict::certified_pass : Verdict::undecided);
  return cert;
}

}  // namespace slotfair
