#include <doctest.h>

#include <cmath>

#include "cline/errors.hpp"
#include "cline/nonlinearity.hpp"

using namespace cline;

TEST_CASE("builtins: values, derivatives, growth flags") {
  Nonlinearity gd = Nonlinearity::make_builtin(BuiltinG::logistic_dominant);
  CHECK(gd(0.5) == doctest::Approx(0.125));
  CHECK(gd.deriv(0.5) == doctest::Approx(2 * 0.5 - 3 * 0.25));
  CHECK(gd.has_g0());  // g(u)/u = u(1-u) -> 0
  CHECK(gd.has_g1());

  Nonlinearity gh = Nonlinearity::make_builtin(BuiltinG::logistic_haploid);
  CHECK(gh(0.5) == doctest::Approx(0.25));
  CHECK_FALSE(gh.has_g0());  // g'(0) = 1
  CHECK(gh.deriv(0.0) == doctest::Approx(1.0));
  CHECK(gh.has_g1());
}

TEST_CASE("custom expression nonlinearity, symbolic and numeric derivative") {
  Nonlinearity g = Nonlinearity::from_expr("u^2*(1-u)");
  CHECK(g(0.5) == doctest::Approx(0.125));
  CHECK(g.deriv(0.3) == doctest::Approx(2 * 0.3 - 3 * 0.09).epsilon(1e-12));
  CHECK(g.smooth_c1());

  // non-polynomial: central differences
  Nonlinearity gs = Nonlinearity::from_expr("sin(pi*u)*u*(1-u)");
  double u = 0.37;
  double h = 1e-6;
  double fd = (gs(u + h) - gs(u - h)) / (2 * h);
  CHECK(gs.deriv(u) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("deriv matches central differences on a grid (invariant)") {
  for (auto which : {BuiltinG::logistic_dominant, BuiltinG::logistic_haploid}) {
    Nonlinearity g = Nonlinearity::make_builtin(which);
    for (int i = 1; i < 99; ++i) {
      double u = 0.01 * i;
      double fd = (g(u + 1e-6) - g(u - 1e-6)) / 2e-6;
      CHECK(std::abs(g.deriv(u) - fd) < 1e-6);
    }
  }
}

TEST_CASE("validation rejects a nonlinearity that does not vanish at the ends") {
  CHECK_THROWS_AS(Nonlinearity::from_expr("u"), Error);
  CHECK_THROWS_AS(Nonlinearity::from_expr("u*(1-u) - 0.5"), Error);
}

TEST_CASE("range statistics: closed forms for the dominant logistic") {
  Nonlinearity g = Nonlinearity::make_builtin(BuiltinG::logistic_dominant);
  // g(u)/u = u(1-u) is increasing on [0, 1/2]
  for (double d : {0.1, 0.25, 0.4}) {
    CHECK(zeta_stat(g, d) == doctest::Approx(d * (1 - d)).epsilon(1e-7));
    CHECK(gamma_stat(g, d) == doctest::Approx((d / 2) * (1 - d / 2)).epsilon(1e-7));
  }
  // Gamma(d) = max g on [0,d]: g increasing to u = 2/3
  CHECK(Gamma_stat(g, 0.5) == doctest::Approx(0.125).epsilon(1e-7));
  CHECK(Gamma_stat(g, 0.9) == doctest::Approx(4.0 / 27.0).epsilon(1e-7));
  // chi(d, D) = min at an endpoint
  CHECK(chi_stat(g, 0.2, 0.5) == doctest::Approx(g(0.2)).epsilon(1e-7));
  CHECK(chi_stat(g, 0.5, 0.99) == doctest::Approx(g(0.99)).epsilon(1e-6));
}

TEST_CASE("chi(d,d) equals g(d) (degenerate range)") {
  Nonlinearity g = Nonlinearity::make_builtin(BuiltinG::logistic_dominant);
  for (double d : {0.1, 0.5, 0.9}) {
    CHECK(chi_stat(g, d, d) == doctest::Approx(g(d)).epsilon(1e-8));
  }
}

TEST_CASE("conservative rounding: doubling the grid never crosses the stored value") {
  Nonlinearity g = Nonlinearity::make_builtin(BuiltinG::logistic_dominant);
  for (double d : {0.13, 0.37, 0.61}) {
    RangeStats coarse = range_stats(g, d, 0.9, 4096);
    RangeStats fine = range_stats(g, d, 0.9, 8192);
    CHECK(fine.gamma <= coarse.gamma + 1e-15);   // minima rounded down stay below
    CHECK(fine.chi <= coarse.chi + 1e-15);
    CHECK(fine.zeta >= coarse.zeta - 1e-15);     // maxima rounded up stay above
    CHECK(fine.Gamma >= coarse.Gamma - 1e-15);
  }
}

TEST_CASE("range_stats domain errors") {
  Nonlinearity g = Nonlinearity::make_builtin(BuiltinG::logistic_dominant);
  CHECK_THROWS_AS(range_stats(g, 0.5, 1.0), Error);
  CHECK_THROWS_AS(range_stats(g, 0.0, 0.5), Error);
}

TEST_CASE("lipschitz_at_one: grid suprema for three nonlinearities") {
  // g = u^2(1-u): g/(1-u) = u^2, sup = 1
  Nonlinearity gd = Nonlinearity::make_builtin(BuiltinG::logistic_dominant);
  double K1 = lipschitz_at_one(gd);
  CHECK(K1 >= 1.0);
  CHECK(K1 <= 1.02);  // 1% round-up of the grid supremum

  // g = u(1-u): ratio = u, sup = 1
  Nonlinearity gh = Nonlinearity::make_builtin(BuiltinG::logistic_haploid);
  CHECK(lipschitz_at_one(gh) == doctest::Approx(1.01).epsilon(1e-3));

  // g = u(1-u)^2: ratio = u(1-u), sup = 1/4
  Nonlinearity g3 = Nonlinearity::from_expr("u*(1-u)^2");
  CHECK(lipschitz_at_one(g3) == doctest::Approx(0.25 * 1.01).epsilon(1e-3));
}
