#include "slotfair/mass.hpp"

#include <algorithm>
#include <stdexcept>

namespace slotfair {

Rational mass_after(const UtilityFn& u, const EPSet& s, TimeSlot h) {
  Rational total(0);
  for (TimeSlot t : s.prefix()) {
    if (t > h) total += u.weight(t);
  }
  if (!s.is_infinite()) return total;

  TimeSlot n0 = s.threshold();
  std::uint64_t period = s.period();
  TimeSlot base = std::max(h, n0);
  Rational one_minus = Rational(1) - u.delta();
  Rational factor = u.scale() * one_minus / (Rational(1) - rat_pow(u.delta(), period));
  for (std::uint64_t a : s.residues()) {
    TimeSlot first = n0 + 1 + a;
    if (first <= base) first += (base - first) / period * period + period;
    total += factor * rat_pow(u.delta(), first - 1);
  }
  for (const auto& [t, w] : u.adjustments()) {
    if (t > base && s.contains(t)) total += u.scale() * (w - u.geometric_raw(t));
  }
  return total;
}

Rational mass_exact(const UtilityFn& u, const EPSet& s) { return mass_after(u, s, 0); }

Rational kakeya_level(const UtilityFn& u) {
  Rational best = u.delta() / (Rational(1) - u.delta());
  Rational tail(1);
  for (TimeSlot t = 1; t <= u.last_adjusted(); ++t) {
    Rational w = u.weight(t);
    tail -= w;
    if (w.sign() > 0) best = min(best, tail / w);
  }
  return best;
}

bool is_monotonic(const UtilityFn& u) {
  for (TimeSlot t = 1; t <= u.last_adjusted(); ++t) {
    if (u.raw(t) < u.raw(t + 1)) return false;
  }
  return true;
}

Reordering monotonic_reordering(const UtilityFn& u) {
  if (is_monotonic(u)) return Reordering{u, {}, 0};

  TimeSlot last = u.last_adjusted();
  struct Entry {
    Rational w;
    TimeSlot t;
  };
  std::vector<Entry> head;
  for (TimeSlot t = 1; t <= last; ++t) {
    Rational w = u.weight(t);
    if (w.sign() > 0) head.push_back({w, t});
  }
  std::stable_sort(head.begin(), head.end(), [](const Entry& a, const Entry& b) { return a.w > b.w; });

  std::vector<Rational> sorted;
  std::vector<TimeSlot> origin;
  TimeSlot j = last + 1;
  Rational tw = u.weight(j);
  for (const auto& e : head) {
    while (tw > e.w) {
      sorted.push_back(tw);
      origin.push_back(j);
      tw = u.weight(++j);
    }
    sorted.push_back(e.w);
    origin.push_back(e.t);
  }
  std::uint64_t m = sorted.size();
  std::uint64_t offset = j - m - 1;

  Rational c = u.scale() * rat_pow(u.delta(), offset);
  std::map<TimeSlot, Rational> adj;
  for (std::uint64_t s = 1; s <= m; ++s) adj.emplace(s, sorted[s - 1] / c);
  UtilityFn out = UtilityFn::perturbed(u.delta(), std::move(adj));
  if (out.scale() != c) throw std::logic_error("monotonic reordering lost normalization");
  return Reordering{std::move(out), std::move(origin), offset};
}

}  // namespace slotfair
