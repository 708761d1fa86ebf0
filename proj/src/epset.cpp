#include "slotfair/epset.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "slotfair/errors.hpp"

namespace slotfair {

namespace {

constexpr std::uint64_t kMaxPeriod = std::uint64_t{1} << 28;

std::uint64_t checked_lcm(std::uint64_t a, std::uint64_t b) {
  std::uint64_t g = std::gcd(a, b);
  std::uint64_t l = a / g * b;
  if (l > kMaxPeriod) throw std::length_error("EPSet period exceeds supported size");
  return l;
}

}  // namespace

EPSet EPSet::canonical(std::vector<bool> bits, TimeSlot threshold, std::uint64_t period) {
  // bits[t - 1] is membership of slot t for t in [1, threshold + period].
  std::vector<bool> pattern(bits.begin() + static_cast<std::ptrdiff_t>(threshold), bits.end());

  std::uint64_t p = period;
  for (std::uint64_t d = 1; d < period; ++d) {
    if (period % d != 0) continue;
    bool ok = true;
    for (std::uint64_t x = d; x < period && ok; ++x) ok = pattern[x] == pattern[x - d];
    if (ok) {
      p = d;
      break;
    }
  }
  pattern.resize(p);

  TimeSlot n0 = threshold;
  while (n0 > 0 && bits[n0 - 1] == pattern[p - 1]) {
    std::rotate(pattern.rbegin(), pattern.rbegin() + 1, pattern.rend());
    --n0;
  }

  EPSet s;
  s.threshold_ = n0;
  s.period_ = p;
  for (TimeSlot t = 1; t <= n0; ++t) {
    if (bits[t - 1]) s.prefix_.push_back(t);
  }
  for (std::uint64_t x = 0; x < p; ++x) {
    if (pattern[x]) s.residues_.push_back(x);
  }
  if (s.residues_.empty()) {
    // Finite set: the threshold collapses onto the largest member.
    s.threshold_ = s.prefix_.empty() ? 0 : s.prefix_.back();
    s.period_ = 1;
  }
  return s;
}

EPSet EPSet::from_predicate(TimeSlot threshold, std::uint64_t period,
                            const std::function<bool(TimeSlot)>& member) {
  if (period == 0) throw std::invalid_argument("EPSet period must be >= 1");
  if (period > kMaxPeriod) throw std::length_error("EPSet period exceeds supported size");
  std::vector<bool> bits(threshold + period);
  for (TimeSlot t = 1; t <= threshold + period; ++t) bits[t - 1] = member(t);
  return canonical(std::move(bits), threshold, period);
}

EPSet EPSet::make(TimeSlot threshold, std::vector<TimeSlot> prefix, std::uint64_t period,
                  std::vector<std::uint64_t> residues) {
  if (period == 0) throw std::invalid_argument("EPSet period must be >= 1");
  for (TimeSlot t : prefix) {
    if (t < 1 || t > threshold) {
      throw std::invalid_argument("EPSet prefix member " + std::to_string(t) +
                                  " outside [1, threshold]");
    }
  }
  for (std::uint64_t r : residues) {
    if (r >= period) {
      throw std::invalid_argument("EPSet residue " + std::to_string(r) + " >= period");
    }
  }
  std::sort(prefix.begin(), prefix.end());
  std::sort(residues.begin(), residues.end());
  return from_predicate(threshold, period, [&](TimeSlot t) {
    if (t <= threshold) return std::binary_search(prefix.begin(), prefix.end(), t);
    return std::binary_search(residues.begin(), residues.end(), (t - threshold - 1) % period);
  });
}

EPSet EPSet::all() { return make(0, {}, 1, {0}); }

EPSet EPSet::finite(std::vector<TimeSlot> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!members.empty() && members.front() == 0) {
    throw std::invalid_argument("time slots start at 1");
  }
  TimeSlot n0 = members.empty() ? 0 : members.back();
  return make(n0, std::move(members), 1, {});
}

EPSet EPSet::progression(TimeSlot first, std::uint64_t step) {
  if (first == 0) throw std::invalid_argument("time slots start at 1");
  return make(first - 1, {}, step, {0});
}

EPSet EPSet::after(TimeSlot h) { return make(h, {}, 1, {0}); }

EPSet EPSet::range(TimeSlot a, TimeSlot b) {
  std::vector<TimeSlot> m;
  for (TimeSlot t = std::max<TimeSlot>(a, 1); t <= b; ++t) m.push_back(t);
  return finite(std::move(m));
}

std::vector<std::uint64_t> EPSet::residues() const { return residues_; }

bool EPSet::contains(TimeSlot t) const {
  if (t == 0) return false;
  if (t <= threshold_) return std::binary_search(prefix_.begin(), prefix_.end(), t);
  if (residues_.empty()) return false;
  return std::binary_search(residues_.begin(), residues_.end(), (t - threshold_ - 1) % period_);
}

std::uint64_t EPSet::count_upto(TimeSlot h) const {
  auto in_prefix = static_cast<std::uint64_t>(
      std::upper_bound(prefix_.begin(), prefix_.end(), std::min(h, threshold_)) -
      prefix_.begin());
  if (h <= threshold_ || residues_.empty()) return in_prefix;
  std::uint64_t span = h - threshold_;
  std::uint64_t full = span / period_;
  std::uint64_t part = static_cast<std::uint64_t>(
      std::lower_bound(residues_.begin(), residues_.end(), span % period_) - residues_.begin());
  return in_prefix + full * residues_.size() + part;
}

TimeSlot EPSet::tau(std::uint64_t r) const {
  if (r == 0) throw std::invalid_argument("ranks start at 1");
  if (r <= prefix_.size()) return prefix_[r - 1];
  if (residues_.empty()) {
    throw Error(ErrorCode::rank_out_of_range,
                "rank " + std::to_string(r) + " exceeds set size " +
                    std::to_string(prefix_.size()));
  }
  std::uint64_t k = r - prefix_.size() - 1;
  std::uint64_t m = residues_.size();
  return threshold_ + 1 + (k / m) * period_ + residues_[k % m];
}

std::optional<TimeSlot> EPSet::next_after(TimeSlot t) const {
  if (t < threshold_) {
    auto it = std::upper_bound(prefix_.begin(), prefix_.end(), t);
    if (it != prefix_.end()) return *it;
  }
  if (residues_.empty()) return std::nullopt;
  TimeSlot s = std::max(t + 1, threshold_ + 1);
  std::uint64_t off = s - threshold_ - 1;
  std::uint64_t base = off / period_ * period_;
  auto it = std::lower_bound(residues_.begin(), residues_.end(), off % period_);
  if (it != residues_.end()) return threshold_ + 1 + base + *it;
  return threshold_ + 1 + base + period_ + residues_.front();
}

std::vector<TimeSlot> EPSet::members_upto(TimeSlot h) const {
  std::vector<TimeSlot> out;
  for (TimeSlot t : prefix_) {
    if (t > h) return out;
    out.push_back(t);
  }
  if (residues_.empty()) return out;
  for (TimeSlot base = threshold_ + 1;; base += period_) {
    for (std::uint64_t r : residues_) {
      if (base + r > h) return out;
      out.push_back(base + r);
    }
  }
}

EPSet EPSet::cycle(std::uint64_t r, std::uint64_t l) const {
  if (l == 0) throw std::invalid_argument("cycle length must be >= 1");
  TimeSlot first = tau(r);
  if (residues_.empty()) {
    std::vector<TimeSlot> out;
    for (std::uint64_t k = r; k <= prefix_.size(); k += l) out.push_back(prefix_[k - 1]);
    return finite(std::move(out));
  }
  TimeSlot n1 = threshold_;
  if (first > n1 + 1) n1 += (first - 1 - threshold_ + period_ - 1) / period_ * period_;
  std::uint64_t new_period = period_ * l;
  if (new_period > kMaxPeriod) throw std::length_error("EPSet period exceeds supported size");
  std::vector<bool> bits(n1 + new_period);
  std::uint64_t rank = 0;
  for (TimeSlot t = 1; t <= n1 + new_period; ++t) {
    if (!contains(t)) continue;
    ++rank;
    if (rank >= r && (rank - r) % l == 0) bits[t - 1] = true;
  }
  return canonical(std::move(bits), n1, new_period);
}

std::string EPSet::str() const {
  std::string s = "{";
  auto shown = members_upto(std::max<TimeSlot>(threshold_ + 2 * period_, 12));
  for (std::size_t i = 0; i < shown.size() && i < 16; ++i) {
    if (i) s += ",";
    s += std::to_string(shown[i]);
  }
  if (is_infinite() || shown.size() > 16) s += ",...";
  return s + "}";
}

EPSet boolean(BoolOp op, const EPSet& a, const EPSet& b) {
  TimeSlot n0 = std::max(a.threshold(), b.threshold());
  std::uint64_t p = checked_lcm(a.period(), b.period());
  return EPSet::from_predicate(n0, p, [&](TimeSlot t) {
    bool x = a.contains(t), y = b.contains(t);
    switch (op) {
      case BoolOp::union_: return x || y;
      case BoolOp::intersect: return x && y;
      case BoolOp::difference: return x && !y;
    }
    return false;
  });
}

bool is_subset(const EPSet& a, const EPSet& b) { return set_difference(a, b).empty(); }

}  // namespace slotfair
