#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "colorquant/scalars.hpp"

using cq::Scalar;
using cq::TruncSeries;

TEST_CASE("rational arithmetic") {
  Scalar a = Scalar::rational(1, 2);
  Scalar b = Scalar::rational(1, 3);
  CHECK(a + b == Scalar::rational(5, 6));
  CHECK(a * b == Scalar::rational(1, 6));
  CHECK(a - a == Scalar::integer(0));
  CHECK(Scalar::rational(5, 6).inverse() == Scalar::rational(6, 5));
  CHECK((a + b).is_rational());
  CHECK((a + b).rational_value() == cq::Rational(5, 6));
  CHECK_THROWS_AS(Scalar::rational(1, 0), cq::DivisionByZero);
  CHECK_THROWS_AS(Scalar::integer(0).inverse(), cq::DivisionByZero);
}

TEST_CASE("roots of unity reduce against the cyclotomic modulus") {
  Scalar i = Scalar::zeta(4);
  CHECK(i * i == Scalar::integer(-1));
  CHECK(i.pow(4) == Scalar::integer(1));
  CHECK(i.pow(-1) == Scalar::zeta_pow(4, 3));

  Scalar w = Scalar::zeta(3);
  Scalar one = Scalar::integer(1);
  CHECK((one + w) * (one + w * w) == one);
  CHECK(one + w + w * w == Scalar::integer(0));
  CHECK(w.inverse() == w * w);

  // At conductor 5 the basis stops at z^3, so z^4 folds downward.
  Scalar z5 = Scalar::zeta(5);
  Scalar folded = -(one + z5 + z5.pow(2) + z5.pow(3));
  CHECK(z5.pow(4) == folded);
  CHECK(z5.pow(5) == one);

  // Degenerate conductors collapse into Q.
  CHECK(Scalar::zeta(1) == one);
  CHECK(Scalar::zeta(2) == Scalar::integer(-1));
  CHECK(Scalar::zeta(2).conductor() == 1);
}

TEST_CASE("rationals lift into any conductor but distinct conductors clash") {
  Scalar half = Scalar::rational(1, 2);
  Scalar w = Scalar::zeta(3);
  CHECK((half + w) - w == half);
  CHECK_THROWS_AS(Scalar::zeta(3) + Scalar::zeta(4), cq::ConductorMismatch);
  CHECK_THROWS_AS(Scalar::zeta(3) * Scalar::zeta(5), cq::ConductorMismatch);
}

TEST_CASE("scalar parsing and printing") {
  CHECK(Scalar::parse("1/4", 1) == Scalar::rational(1, 4));
  CHECK(Scalar::parse("-3", 1) == Scalar::integer(-3));
  CHECK(Scalar::parse("z", 4) == Scalar::zeta(4));
  CHECK(Scalar::parse("z^2", 4) == Scalar::integer(-1));
  CHECK(Scalar::parse("1 - z", 4) == Scalar::integer(1) - Scalar::zeta(4));
  CHECK(Scalar::parse("-1/2*z^3 + 2", 8) ==
        Scalar::integer(2) - Scalar::zeta_pow(8, 3) * Scalar::rational(1, 2));
  CHECK(Scalar::parse("2z", 4) == Scalar::zeta(4) * Scalar::integer(2));
  CHECK_THROWS_AS(Scalar::parse("", 1), cq::ParseError);
  CHECK_THROWS_AS(Scalar::parse("1+", 1), cq::ParseError);
  CHECK_THROWS_AS(Scalar::parse("q", 4), cq::ParseError);
  CHECK_THROWS_AS(Scalar::parse("1/0", 1), cq::DivisionByZero);

  // str() output parses back to the same value.
  Scalar s = Scalar::rational(-7, 3) * Scalar::zeta_pow(8, 5) +
             Scalar::rational(1, 2);
  CHECK(Scalar::parse(s.str(), 8) == s);
  CHECK(Scalar::integer(0).str() == "0");
}

TEST_CASE("randomized field axioms at conductor 12") {
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  auto random_scalar = [&] {
    std::vector<cq::Rational> c;
    for (int k = 0; k < 4; ++k) {
      cq::Rational q(num(rng), den(rng));
      q.canonicalize();
      c.push_back(q);
    }
    return Scalar::from_coeffs(12, c);
  };
  for (int trial = 0; trial < 25; ++trial) {
    Scalar a = random_scalar(), b = random_scalar(), c = random_scalar();
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    if (!a.is_zero()) CHECK(a * a.inverse() == Scalar::integer(1));
  }
}

TEST_CASE("truncated series arithmetic") {
  TruncSeries l = TruncSeries::lambda(3);
  TruncSeries e = l.exp();
  CHECK(e.coeff(0) == Scalar::integer(1));
  CHECK(e.coeff(1) == Scalar::integer(1));
  CHECK(e.coeff(2) == Scalar::rational(1, 2));

  TruncSeries l4 = TruncSeries::lambda(4);
  CHECK((l4.exp() * (-l4).exp()).is_one());
  CHECK(l4.exp().inverse() == (-l4).exp());

  TruncSeries geom = TruncSeries::constant(4, Scalar::integer(1)) - l4;
  TruncSeries inv = geom.inverse();
  for (std::uint32_t k = 0; k < 4; ++k)
    CHECK(inv.coeff(k) == Scalar::integer(1));
  CHECK((geom * inv).is_one());

  CHECK_THROWS_AS(l4.inverse(), cq::DomainError);
  CHECK_THROWS_AS(geom.exp(), cq::DomainError);
  CHECK_THROWS_AS(l + l4, cq::OrderMismatch);
}

TEST_CASE("series exp is a homomorphism on commuting arguments") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 4);
  for (int trial = 0; trial < 10; ++trial) {
    TruncSeries a(5), b(5);
    for (std::uint32_t k = 1; k < 5; ++k) {
      a.set_coeff(k, Scalar::rational(num(rng), den(rng)));
      b.set_coeff(k, Scalar::rational(num(rng), den(rng)));
    }
    CHECK(a.exp() * b.exp() == (a + b).exp());
  }
}

TEST_CASE("series shift and truncation") {
  TruncSeries s(3);
  s.set_coeff(1, Scalar::integer(1));
  s.set_coeff(2, Scalar::integer(2));
  TruncSeries down = s.lambda_shift_down();
  CHECK(down.order() == 2);
  CHECK(down.coeff(0) == Scalar::integer(1));
  CHECK(down.coeff(1) == Scalar::integer(2));
  CHECK_THROWS_AS(TruncSeries::constant(3, Scalar::integer(1)).lambda_shift_down(),
                  cq::DomainError);

  TruncSeries t = s.truncated(2);
  CHECK(t.order() == 2);
  CHECK(t.coeff(1) == Scalar::integer(1));
  CHECK_THROWS_AS(s.truncated(5), cq::DomainError);
}
