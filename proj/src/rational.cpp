#include "slotfair/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "slotfair/errors.hpp"

namespace slotfair {

namespace {

bool is_decimal_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  std::string owned(s);
  if (!owned.empty() && owned.front() == '+') owned.erase(0, 1);
  return mpz_class(owned, 10);
}

}  // namespace

Rational::Rational(const mpz_class& num, const mpz_class& den) : value_(num, den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                         : text.substr(slash + 1);
  if (!is_decimal_integer(num) || !is_decimal_integer(den) || den.front() == '-' ||
      den.front() == '+') {
    throw Error(ErrorCode::parse_error,
                "malformed rational \"" + std::string(text) + "\" (expected p/q)");
  }
  mpz_class d = parse_integer(den);
  if (d == 0) {
    throw Error(ErrorCode::parse_error,
                "rational \"" + std::string(text) + "\" has zero denominator");
  }
  return Rational(parse_integer(num), d);
}

std::string Rational::str() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_canonical(mpq_class(a.value_ + b.value_));
}
Rational operator-(const Rational& a, const Rational& b) {
  return Rational::from_canonical(mpq_class(a.value_ - b.value_));
}
Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_canonical(mpq_class(a.value_ * b.value_));
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("rational division by zero");
  return Rational::from_canonical(mpq_class(a.value_ / b.value_));
}
Rational Rational::operator-() const { return from_canonical(mpq_class(-value_)); }

std::size_t Rational::hash() const {
  std::size_t h1 = std::hash<std::string>{}(value_.get_num().get_str(16));
  std::size_t h2 = std::hash<std::string>{}(value_.get_den().get_str(16));
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

Rational rat_pow(const Rational& x, std::uint64_t e) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), x.raw().get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), x.raw().get_den_mpz_t(), e);
  // Powers of a canonical fraction stay canonical.
  mpq_class q;
  mpq_set_num(q.get_mpq_t(), num.get_mpz_t());
  mpq_set_den(q.get_mpq_t(), den.get_mpz_t());
  return Rational::from_canonical(std::move(q));
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational pow10_neg(unsigned k) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, k);
  return Rational(mpz_class(1), den);
}

}  // namespace slotfair
