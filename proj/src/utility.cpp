#include "slotfair/utility.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace slotfair {

UtilityFn UtilityFn::geometric(const Rational& delta) { return perturbed(delta, {}); }

UtilityFn UtilityFn::perturbed(const Rational& delta, std::map<TimeSlot, Rational> adjustments) {
  if (delta <= Rational(0) || delta >= Rational(1)) {
    throw std::invalid_argument("discount factor " + delta.str() + " is not in (0, 1)");
  }
  UtilityFn u;
  u.delta_ = delta;
  u.p_ = delta.numerator();
  u.q_ = delta.denominator();
  for (auto& [t, w] : adjustments) {
    if (t == 0) throw std::invalid_argument("time slots start at 1");
    if (w.sign() < 0) {
      throw std::invalid_argument("negative weight " + w.str() + " at slot " + std::to_string(t));
    }
    if (w != u.geometric_raw(t)) u.adjustments_.emplace(t, w);
  }
  u.finish();
  return u;
}

void UtilityFn::finish() {
  Rational total(1);
  for (const auto& [t, w] : adjustments_) total += w - geometric_raw(t);
  scale_ = Rational(1) / total;
  key_ = "d=" + delta_.str();
  for (const auto& [t, w] : adjustments_) key_ += ";" + std::to_string(t) + ":" + w.str();
}

Rational UtilityFn::geometric_raw(TimeSlot t) const {
  return (Rational(1) - delta_) * rat_pow(delta_, t - 1);
}

Rational UtilityFn::raw(TimeSlot t) const {
  auto it = adjustments_.find(t);
  return it == adjustments_.end() ? geometric_raw(t) : it->second;
}

Rational UtilityFn::tail_after(TimeSlot h) const {
  if (h >= last_adjusted()) return scale_ * rat_pow(delta_, h);
  Rational head(0);
  for (TimeSlot t = 1; t <= h; ++t) head += weight(t);
  return Rational(1) - head;
}

TimeSlot UtilityFn::horizon_for(const Rational& eps) const {
  if (eps.sign() <= 0) throw std::invalid_argument("precision must be positive");
  double guess = std::log(eps.to_double() / scale_.to_double()) / std::log(delta_.to_double());
  TimeSlot h = last_adjusted();
  if (std::isfinite(guess) && guess > 2) h = std::max<TimeSlot>(h, static_cast<TimeSlot>(guess) - 2);
  while (tail_after(h) > eps) ++h;
  while (h > last_adjusted() && tail_after(h - 1) <= eps) --h;
  return h;
}

std::string UtilityFn::str() const {
  if (is_geometric()) return "geometric(" + delta_.str() + ")";
  return "perturbed_geometric(" + key_ + ")";
}

void Economy::validate() const {
  if (agents.empty()) throw std::invalid_argument("economy needs at least one agent");
  std::set<std::string> names;
  for (const auto& a : agents) {
    if (!a.utility) throw std::invalid_argument("agent " + a.name + " has no utility");
    if (!names.insert(a.name).second) {
      throw std::invalid_argument("duplicate agent name " + a.name);
    }
  }
}

}  // namespace slotfair
