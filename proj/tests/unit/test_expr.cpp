#include <doctest.h>

#include <cmath>

#include "fharm/errors.hpp"
#include "fharm/expr.hpp"

using fharm::Error;
using fharm::expr::Expression;

TEST_CASE("expression evaluation and derivatives") {
  const auto e = Expression::parse("(1+r^2)^(-0.5)");
  CHECK(e(2.0) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));

  const auto d = e.eval2(2.0);
  // d/dr (1+r^2)^{-1/2} = -r (1+r^2)^{-3/2}
  CHECK(d.d1 == doctest::Approx(-2.0 * std::pow(5.0, -1.5)).epsilon(1e-13));
  // second derivative: (2r^2 - 1) (1+r^2)^{-5/2}
  CHECK(d.d2 == doctest::Approx(7.0 * std::pow(5.0, -2.5)).epsilon(1e-13));
}

TEST_CASE("expression grammar coverage") {
  CHECK(Expression::parse("sinh(2*r)/2")(1.0) ==
        doctest::Approx(std::sinh(2.0) / 2.0));
  CHECK(Expression::parse("exp(-r)*cosh(r)")(0.7) ==
        doctest::Approx(std::exp(-0.7) * std::cosh(0.7)));
  CHECK(Expression::parse("pi")(0.0) == doctest::Approx(M_PI));
  CHECK(Expression::parse("-r^2")(3.0) == doctest::Approx(-9.0));
  CHECK(Expression::parse("2^3^1")(0.0) == doctest::Approx(8.0));
  // Integer powers accept negative bases.
  CHECK(Expression::parse("(-2)^3", "t")(0.0) == doctest::Approx(-8.0));
}

TEST_CASE("expression parse errors carry position info") {
  CHECK_THROWS_AS(Expression::parse("1 + * 2"), Error);
  CHECK_THROWS_AS(Expression::parse("sin(r)"), Error);
  CHECK_THROWS_AS(Expression::parse("(1+r"), Error);
  CHECK_THROWS_AS(Expression::parse("1 + r)"), Error);
}

TEST_CASE("fractional power of a negative base is rejected at evaluation") {
  const auto e = Expression::parse("(r-2)^0.5");
  CHECK_THROWS_AS(e(1.0), Error);
  CHECK(e(3.0) == doctest::Approx(1.0));
}
