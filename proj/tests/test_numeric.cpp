#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "generators.hpp"
#include "slotfair/errors.hpp"
#include "slotfair/interval.hpp"

using namespace slotfair;
using boost::multiprecision::cpp_rational;

namespace {

cpp_rational to_boost(const Rational& r) {
  return cpp_rational(boost::multiprecision::cpp_int(r.numerator().get_str()),
                      boost::multiprecision::cpp_int(r.denominator().get_str()));
}

bool same(const Rational& r, const cpp_rational& b) {
  return r.numerator().get_str() == numerator(b).str() && r.denominator().get_str() == denominator(b).str();
}

RatInterval random_interval(gen::Rng& rng) {
  Rational a = gen::rational(rng, 50), b = gen::rational(rng, 50);
  return a <= b ? RatInterval(a, b) : RatInterval(b, a);
}

Rational random_member(gen::Rng& rng, const RatInterval& i) {
  return i.lo() + i.width() * Rational(gen::uniform(rng, 0, 64), 64);
}

}  // namespace

TEST_CASE("interval_compare examples") {
  CHECK(interval_compare(RatInterval::point(Rational(1, 3)), RatInterval::point(Rational(1, 2))) == Ordering::less);
  CHECK(interval_compare(RatInterval(0, 1), RatInterval(0, 1)) == Ordering::undecided);
  CHECK(interval_compare(RatInterval::point(Rational(2, 7)), RatInterval::point(Rational(2, 7))) ==
        Ordering::equal);
}

TEST_CASE("rat_pow examples") {
  CHECK(rat_pow(Rational(5, 6), 3) == Rational(125, 216));
  CHECK(rat_pow(Rational(1, 2), 0) == Rational(1));
  CHECK(rat_pow(Rational(199, 200), 2) == Rational(39601, 40000));
  CHECK(rat_pow(Rational(0), 0) == Rational(1));
}

TEST_CASE("parsing and printing") {
  CHECK(Rational::parse("5/6") == Rational(5, 6));
  CHECK(Rational::parse("-10/4") == Rational(-5, 2));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational(6, 4).str() == "3/2");
  CHECK(Rational(4, 2).str() == "2");
  for (const char* bad : {"", "1/0", "a/b", "1/", "/3", "1.5", "1//2"}) {
    CAPTURE(bad);
    try {
      Rational::parse(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse_error);
    }
  }
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("arithmetic agrees with an independent big-rational implementation") {
  gen::Rng rng(11);
  for (int k = 0; k < 3000; ++k) {
    Rational a = gen::rational(rng, 100000), b = gen::rational(rng, 100000);
    if (k % 7 == 0) a = rat_pow(a, static_cast<std::uint64_t>(gen::uniform(rng, 0, 9)));
    cpp_rational ba = to_boost(a), bb = to_boost(b);
    REQUIRE(same(a + b, ba + bb));
    REQUIRE(same(a - b, ba - bb));
    REQUIRE(same(a * b, ba * bb));
    if (!b.is_zero()) REQUIRE(same(a / b, ba / bb));
    REQUIRE(((a < b) == (ba < bb)));
    for (const Rational& r : {a + b, a * b}) {
      REQUIRE(r.denominator() > 0);
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), r.numerator().get_mpz_t(), r.denominator().get_mpz_t());
      REQUIRE(g == 1);
    }
  }
}

TEST_CASE("interval arithmetic is outward-conservative") {
  gen::Rng rng(12);
  for (int k = 0; k < 2000; ++k) {
    RatInterval a = random_interval(rng), b = random_interval(rng);
    Rational x = random_member(rng, a), y = random_member(rng, b);
    REQUIRE((a + b).contains(x + y));
    REQUIRE((a - b).contains(x - y));
    REQUIRE((a * b).contains(x * y));
    if (b.lo().sign() > 0 || b.hi().sign() < 0) REQUIRE((a / b).contains(x / y));
  }
  CHECK_THROWS_AS(RatInterval(1, 2) / RatInterval(-1, 1), std::domain_error);
  CHECK_THROWS_AS(RatInterval(2, 1), std::invalid_argument);
}

TEST_CASE("interval_compare is antisymmetric and consistent with shared points") {
  gen::Rng rng(13);
  for (int k = 0; k < 2000; ++k) {
    RatInterval a = random_interval(rng), b = k % 3 == 0 ? a : random_interval(rng);
    if (k % 5 == 0) a = RatInterval::point(a.lo());
    Ordering ab = interval_compare(a, b), ba = interval_compare(b, a);
    if (ab == Ordering::less) REQUIRE(ba == Ordering::greater);
    if (ab == Ordering::greater) REQUIRE(ba == Ordering::less);
    if (ab == Ordering::equal || ab == Ordering::undecided) REQUIRE(ba == ab);
    bool overlap = a.lo() <= b.hi() && b.lo() <= a.hi();
    if (overlap) REQUIRE((ab == Ordering::equal || ab == Ordering::undecided));
  }
}
