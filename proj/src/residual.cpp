#include "slotfair/residual.hpp"

namespace slotfair {

PrefixMass::PrefixMass(const UtilityFn& u) : u_(&u) {}

void PrefixMass::push(bool member) {
  ++h_;
  g_ *= u_->q();
  if (member) {
    auto it = u_->adjustments().find(h_);
    if (it == u_->adjustments().end()) {
      g_ += ph_;
    } else {
      adjusted_ += it->second.raw();
    }
  }
  qh_ *= u_->q();
  ph_ *= u_->p();
}

Rational PrefixMass::value() const {
  mpq_class geo(mpz_class(g_ * (u_->q() - u_->p())), qh_);
  geo.canonicalize();
  return u_->scale() * (Rational(std::move(geo)) + Rational(adjusted_));
}

void PrefixMass::fraction(mpz_class& num, mpz_class& den) const {
  // scale · ((q - p) G / q^h + A)
  const mpq_class& sc = u_->scale().raw();
  num = (g_ * (u_->q() - u_->p()) * adjusted_.get_den() + adjusted_.get_num() * qh_) * sc.get_num();
  den = qh_ * adjusted_.get_den() * sc.get_den();
}

namespace {

// geometric_raw(t) = (q - p) p^(t-1) / q^t
void geometric_parts(const UtilityFn& u, TimeSlot t, mpz_class& num, mpz_class& den) {
  mpz_pow_ui(num.get_mpz_t(), u.p().get_mpz_t(), t - 1);
  num *= u.q() - u.p();
  mpz_pow_ui(den.get_mpz_t(), u.q().get_mpz_t(), t);
}

}  // namespace

ResidualTracker::ResidualTracker(const UtilityFn& u, const Rational& residual, TimeSlot t)
    : u_(&u), t_(t) {
  // ρ = residual / (scale · geometric_raw(t))
  mpz_class gn, gd;
  geometric_parts(u, t, gn, gd);
  mpq_class rho = residual.raw() * mpq_class(gd, gn) / u.scale().raw();
  rho.canonicalize();
  num_ = rho.get_num();
  den_ = rho.get_den();
}

void ResidualTracker::adjust(int sign) {
  auto it = u_->adjustments().find(t_);
  if (it == u_->adjustments().end()) {
    if (sign < 0) num_ -= den_; else num_ += den_;
    return;
  }
  mpz_class gn, gd;
  geometric_parts(*u_, t_, gn, gd);
  mpq_class c = it->second.raw() * mpq_class(gd, gn);
  c.canonicalize();
  num_ *= c.get_den();
  if (sign < 0) num_ -= c.get_num() * den_; else num_ += c.get_num() * den_;
  den_ *= c.get_den();
}

int ResidualTracker::compare_weight() const {
  auto it = u_->adjustments().find(t_);
  if (it == u_->adjustments().end()) return cmp(num_, den_) < 0 ? -1 : (num_ == den_ ? 0 : 1);
  mpz_class gn, gd;
  geometric_parts(*u_, t_, gn, gd);
  mpq_class c = it->second.raw() * mpq_class(gd, gn);
  c.canonicalize();
  int s = cmp(num_ * c.get_den(), c.get_num() * den_);
  return s < 0 ? -1 : (s > 0 ? 1 : 0);
}

void ResidualTracker::take() { adjust(-1); }
void ResidualTracker::give() { adjust(+1); }

void ResidualTracker::advance() {
  ++t_;
  num_ *= u_->q();
  den_ *= u_->p();
}

Rational ResidualTracker::residual() const {
  mpz_class gn, gd;
  geometric_parts(*u_, t_, gn, gd);
  mpq_class r(mpz_class(num_ * gn), mpz_class(den_ * gd));
  r.canonicalize();
  return u_->scale() * Rational(std::move(r));
}

}  // namespace slotfair
