#include "doctest.h"

#include <random>

#include "cellring/laurent.hpp"

using cellring::LaurentPoly;

namespace {

LaurentPoly random_poly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(0, 6);
  std::uniform_int_distribution<int> expd(-8, 8);
  LaurentPoly p;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    // coefficients up to 2^64 in magnitude
    mpz_class c = rng();
    c = c * 2 + static_cast<unsigned long>(rng() & 1);
    if (rng() & 1) c = -c;
    p += LaurentPoly(c, expd(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("xi squared expands") {
  LaurentPoly xi = LaurentPoly::xi();
  LaurentPoly sq = xi * xi;
  LaurentPoly expect = LaurentPoly::q_power(1) + LaurentPoly(2) + LaurentPoly::q_power(-1);
  CHECK(sq == expect);
  CHECK(sq.coeff_v(0) == 2);
  CHECK(sq.coeff_v(2) == 1);
  CHECK(sq.coeff_v(5) == 0);
}

TEST_CASE("multiplication by zero and one") {
  LaurentPoly xi = LaurentPoly::xi();
  CHECK((xi * LaurentPoly()).is_zero());
  LaurentPoly eig = xi * xi * xi - xi;  // xi^3 - xi
  CHECK(eig * LaurentPoly(1) == eig);
  CHECK(eig.degree() == 3);
  CHECK(eig.valuation() == -3);
}

TEST_CASE("degree in v-units") {
  LaurentPoly p = LaurentPoly(1) + LaurentPoly::q_power(2);  // 1 + q^2
  CHECK(p.degree() == 4);
  CHECK_THROWS_AS(LaurentPoly().degree(), cellring::domain_error);
}

TEST_CASE("bar involution") {
  LaurentPoly xi = LaurentPoly::xi();
  CHECK(xi.bar() == xi);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    LaurentPoly a = random_poly(rng), b = random_poly(rng);
    CHECK(a.bar().bar() == a);
    CHECK((a * b).bar() == a.bar() * b.bar());
    CHECK((a + b).bar() == a.bar() + b.bar());
  }
}

TEST_CASE("ring axioms on random sparse polynomials") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    LaurentPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("render and parse") {
  LaurentPoly p = LaurentPoly(1) + LaurentPoly::q_power(2);
  CHECK(p.str() == "q^2+1");
  CHECK(LaurentPoly::parse("1+q^2") == p);
  CHECK(LaurentPoly::parse("q^2 + 1") == p);
  LaurentPoly xi = LaurentPoly::xi();
  CHECK(LaurentPoly::parse(xi.str()) == xi);
  CHECK(LaurentPoly::parse("2*q^(-3/2)") == LaurentPoly(2, -3));
  CHECK(LaurentPoly::parse("q^(1/2)") == LaurentPoly(1, 1));
  CHECK(LaurentPoly::parse("-v^3+v") == LaurentPoly(-1, 3) + LaurentPoly(1, 1));
  CHECK_THROWS_AS(LaurentPoly::parse("w^2"), cellring::input_error);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    LaurentPoly a = random_poly(rng);
    if (a.is_zero()) continue;
    CHECK(LaurentPoly::parse(a.str()) == a);
  }
}
