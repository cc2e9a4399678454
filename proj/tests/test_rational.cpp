#include "rsd/rational.hpp"

#include <doctest.h>

#include "rsd/errors.hpp"
#include "rsd/generate.hpp"

using namespace rsd;

TEST_CASE("rational formatting is p/q in lowest terms") {
  CHECK(Rational(7, 8).str() == "7/8");
  CHECK(Rational(4, 2).str() == "2");
  CHECK(Rational(-3, 6).str() == "-1/2");
  CHECK(Rational(0, 5).str() == "0");
  CHECK(Rational(3, -6).str() == "-1/2");  // sign moves to the numerator
}

TEST_CASE("rational parsing accepts the wire grammar only") {
  CHECK(*Rational::parse("7/8") == Rational(7, 8));
  CHECK(*Rational::parse("-3/6") == Rational(-1, 2));
  CHECK(*Rational::parse("42") == Rational(42));
  CHECK(*Rational::parse("-0") == Rational(0));
  CHECK(!Rational::parse(""));
  CHECK(!Rational::parse("1/0"));
  CHECK(!Rational::parse("1/2/3"));
  CHECK(!Rational::parse("a"));
  CHECK(!Rational::parse("1 /2"));
  CHECK(!Rational::parse("3/-6"));
  CHECK(!Rational::parse("1.5"));
}

TEST_CASE("parse_number also takes decimal and scientific forms") {
  CHECK(*Rational::parse_number("0.25") == Rational(1, 4));
  CHECK(*Rational::parse_number("-0.5") == Rational(-1, 2));
  CHECK(*Rational::parse_number("1e-9") == Rational(1, 1000000000));
  CHECK(*Rational::parse_number("2.5e3") == Rational(2500));
  CHECK(*Rational::parse_number("7/8") == Rational(7, 8));
  CHECK(!Rational::parse_number("e5"));
  CHECK(!Rational::parse_number("1.2.3"));
}

TEST_CASE("format-parse round trip for random rationals") {
  Rng rng(2024);
  for (int i = 0; i < 500; ++i) {
    const Rational r = rng.rational_in(-1000, 1000, 997);
    const auto back = Rational::parse(r.str());
    REQUIRE(back);
    CHECK(*back == r);
  }
}

TEST_CASE("arithmetic identities hold exactly") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Rational a = rng.rational_in(-50, 50, 64);
    const Rational b = rng.rational_in(-50, 50, 64);
    CHECK(a + b - b == a);
    CHECK(a + b == b + a);
    if (!b.is_zero()) CHECK(a / b * b == a);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("values are kept in lowest terms with positive denominator") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Rational a = rng.rational_in(-50, 50, 60);
    const Rational b = rng.rational_in(-50, 50, 60);
    const Rational c = a * b;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), c.numerator().get_mpz_t(),
            c.denominator().get_mpz_t());
    CHECK(g == 1);
    CHECK(c.denominator() > 0);
  }
}

TEST_CASE("double conversions") {
  CHECK(Rational::from_double(0.5) == Rational(1, 2));
  CHECK(Rational::from_double(-0.75) == Rational(-3, 4));
  CHECK(Rational(1, 3).to_double() == 1.0 / 3.0);
  CHECK(Rational(2, 3).to_double() == 2.0 / 3.0);
  // Round trip through the exact dyadic representation.
  const double x = 0.1;
  CHECK(Rational::from_double(x).to_double() == x);
}

TEST_CASE("division by zero is rejected") {
  CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
  CHECK_THROWS_AS(Rational(1, 0), Error);
}
