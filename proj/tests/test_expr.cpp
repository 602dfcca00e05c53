#include <doctest.h>

#include <cmath>

#include "cline/errors.hpp"
#include "cline/expr.hpp"

using namespace cline;

TEST_CASE("expression parser evaluates the figure weight formula") {
  Expr e = Expr::parse("2*sin(2*x) - max(0, sin(x))");
  for (double x : {0.1, 1.0, 2.5, 4.0, 6.0}) {
    double expect = 2 * std::sin(2 * x) - std::max(0.0, std::sin(x));
    CHECK(e(x) == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("operators, precedence, constants") {
  CHECK(Expr::parse("1 + 2*3^2")(0) == doctest::Approx(19.0));
  CHECK(Expr::parse("-x^2")(3) == doctest::Approx(-9.0));
  CHECK(Expr::parse("(1+x)/(1-x)")(0.5) == doctest::Approx(3.0));
  CHECK(Expr::parse("cos(pi)")(0) == doctest::Approx(-1.0));
  CHECK(Expr::parse("exp(1) - e")(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(Expr::parse("min(x, 2) + abs(-3)")(5) == doctest::Approx(5.0));
  CHECK(Expr::parse("2e-3 + 1")(0) == doctest::Approx(1.002));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(Expr::parse("2 +"), Error);
  CHECK_THROWS_AS(Expr::parse("foo(x)"), Error);
  CHECK_THROWS_AS(Expr::parse("sin(x"), Error);
  CHECK_THROWS_AS(Expr::parse("x y"), Error);
}

TEST_CASE("polynomial detection and symbolic derivative") {
  Expr g = Expr::parse("u^2*(1-u)", "u");
  CHECK(g.is_polynomial());
  auto d = g.derivative();
  REQUIRE(d.has_value());
  for (double u : {0.0, 0.25, 0.5, 0.9}) {
    CHECK((*d)(u) == doctest::Approx(2 * u - 3 * u * u).epsilon(1e-14));
  }
  CHECK_FALSE(Expr::parse("sin(u)", "u").is_polynomial());
  CHECK_FALSE(Expr::parse("sin(u)", "u").derivative().has_value());
  // division by a constant stays polynomial, by the variable does not
  CHECK(Expr::parse("u/2", "u").is_polynomial());
  CHECK_FALSE(Expr::parse("1/u", "u").is_polynomial());
}

TEST_CASE("variable name is configurable") {
  Expr g = Expr::parse("u*(1-u)", "u");
  CHECK(g(0.5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(Expr::parse("x*(1-x)", "u"), Error);
}
