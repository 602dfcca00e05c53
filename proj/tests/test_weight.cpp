#include <doctest.h>

#include <cmath>

#include "cline/errors.hpp"
#include "cline/numerics.hpp"
#include "cline/weight.hpp"
#include "test_helpers.hpp"

using namespace cline;
using namespace testutil;

TEST_CASE("figure weight on [0,8]: breakpoints and m = 3 (Neumann profile)") {
  WeightSpec w = figure_weight_8();
  NodalDecomposition d = decompose(w, 1e-10);
  CHECK(d.m == 3);
  CHECK(d.bc_profile == BcProfile::neumann);
  CHECK_FALSE(d.leading_neg);
  // breakpoints {0, arccos(1/4), pi, 3pi/2, 2pi, 8}; trailing positivity
  CHECK(d.sigma[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(d.tau[0] == doctest::Approx(kTau1).epsilon(1e-9));
  CHECK(d.sigma[1] == doctest::Approx(M_PI).epsilon(1e-9));
  CHECK(d.tau[1] == doctest::Approx(1.5 * M_PI).epsilon(1e-9));
  CHECK(d.sigma[2] == doctest::Approx(2 * M_PI).epsilon(1e-9));
  CHECK(d.tau[2] == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(d.neg(2).empty());  // I_3^- missing
  // figure axis tick value
  CHECK(d.tau[0] == doctest::Approx(1.31812).epsilon(2e-5));
}

TEST_CASE("figure weight restricted to [0,pi]: m = 1, tau = arccos(1/4)") {
  // a = sin(x)(4cos(x) - 1), root of 4cos(x) = 1 located by bisection
  WeightSpec w = figure_weight_pi();
  NodalDecomposition d = decompose(w, 1e-10);
  CHECK(d.m == 1);
  CHECK(d.tau[0] == doctest::Approx(std::acos(0.25)).epsilon(1e-10));
  CHECK(d.sigma[1] == doctest::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("sin weight: m = 1, breakpoints {0, pi, 2pi}") {
  NodalDecomposition d = decompose(sine_weight(), 1e-10);
  CHECK(d.m == 1);
  CHECK(d.sigma[0] == doctest::Approx(0.0));
  CHECK(d.tau[0] == doctest::Approx(M_PI).epsilon(1e-10));
  CHECK(d.sigma[1] == doctest::Approx(2 * M_PI).epsilon(1e-12));
  CHECK(d.cyclic);
}

TEST_CASE("decompose error paths") {
  WeightSpec w;
  w.period = 1.0;
  w.bc_profile = BcProfile::periodic;
  WeightPiece p;
  p.x0 = 0;
  p.x1 = 1;
  p.expr = Expr::parse("1 + 0*x");
  w.pieces = {std::move(p)};
  CHECK_THROWS_AS(decompose(w), Error);  // NoSignChange

  // periodic profile must start positive at x = 0
  WeightSpec w2 = sine_weight();
  w2.pieces[0].expr = Expr::parse("-sin(x)");
  CHECK_THROWS_AS(decompose(w2), Error);  // NonAlternating

  // the same layout is fine for the Neumann profile (leading negativity)
  w2.bc_profile = BcProfile::neumann;
  NodalDecomposition d2 = decompose(w2);
  CHECK(d2.m == 1);
  CHECK(d2.leading_neg);
  CHECK(d2.neg(-1).hi == doctest::Approx(M_PI).epsilon(1e-9));
  CHECK(d2.neg(0).empty());  // ends positive
}

TEST_CASE("quadratures: closed forms on the [0,pi] weight") {
  // int a^+ = 9/8 and int a^- = 25/8 from the antiderivative cos(x) - cos(2x)
  WeightSpec w = figure_weight_pi();
  NodalDecomposition d = decompose(w);
  WeightQuadratures q = quadratures(w, d, 1e-12);
  CHECK(q.a_plus_L1 == doctest::Approx(9.0 / 8.0).epsilon(1e-10));
  CHECK(q.a_minus_L1 == doctest::Approx(25.0 / 8.0).epsilon(1e-10));
  CHECK(q.pos_L1[0] == doctest::Approx(9.0 / 8.0).epsilon(1e-10));
  CHECK(q.neg_L1[0] == doctest::Approx(25.0 / 8.0).epsilon(1e-10));
  // sign certificates
  CHECK(q.pos_sign_defect[0] < 1e-10 * q.pos_L1[0]);
  CHECK(q.neg_sign_defect[0] < 1e-10 * q.neg_L1[0]);

  // independent Fubini oracle for ||A_1^r|| and ||A_1^l||
  double tau = d.tau[0];
  auto aneg = [&](double x) { return std::max(-w.eval(x), 0.0); };
  double ar = integrate_adaptive([&](double x) { return aneg(x) * (M_PI - x); }, tau, M_PI, 1e-13);
  double al = integrate_adaptive([&](double x) { return aneg(x) * (x - tau); }, tau, M_PI, 1e-13);
  CHECK(q.A_r_L1[0] == doctest::Approx(ar).epsilon(1e-9));
  CHECK(q.A_l_L1[0] == doctest::Approx(al).epsilon(1e-9));
  // A^r + A^l integrate a^-(xi) (sigma_{i+1} - tau_i): consistency
  CHECK(q.A_r_L1[0] + q.A_l_L1[0] ==
        doctest::Approx(q.neg_L1[0] * (M_PI - tau)).epsilon(1e-9));
}

TEST_CASE("quadratures: constant -1 block gives L, L^2/2") {
  WeightSpec w;
  w.period = 3.0;
  w.bc_profile = BcProfile::periodic;
  WeightPiece p1;
  p1.x0 = 0;
  p1.x1 = 1;
  p1.expr = Expr::parse("1");
  WeightPiece p2;
  p2.x0 = 1;
  p2.x1 = 3;
  p2.expr = Expr::parse("-1");
  w.pieces = {std::move(p1), std::move(p2)};
  NodalDecomposition d = decompose(w);
  WeightQuadratures q = quadratures(w, d, 1e-12);
  const double L = 2.0;
  CHECK(q.neg_L1[0] == doctest::Approx(L).epsilon(1e-12));
  // A^r(x) = x - tau, ||A^r||_L1 = L^2/2
  CHECK(q.A_r_L1[0] == doctest::Approx(L * L / 2).epsilon(1e-12));
  CHECK(q.A_l_L1[0] == doctest::Approx(L * L / 2).epsilon(1e-12));
}

TEST_CASE("A^r endpoint identities on a sample grid") {
  // A_i^r(tau_i) = 0, A_i^r(sigma_{i+1}) = ||a||_L1(I_i^-); nondecreasing
  WeightSpec w = figure_weight_pi();
  NodalDecomposition d = decompose(w);
  WeightQuadratures q = quadratures(w, d, 1e-12);
  double tau = d.tau[0];
  auto Ar = [&](double x) { return integrate_weight_neg(w, tau, x, 1e-12); };
  CHECK(Ar(tau) == doctest::Approx(0.0));
  CHECK(Ar(M_PI) == doctest::Approx(q.neg_L1[0]).epsilon(1e-10));
  double prev = -1.0;
  for (int i = 0; i <= 32; ++i) {
    double v = Ar(tau + (M_PI - tau) * i / 32);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("mu_sharp: closed forms and linearity in lambda") {
  WeightSpec w = figure_weight_pi();
  NodalDecomposition d = decompose(w);
  WeightQuadratures q = quadratures(w, d, 1e-12);
  // (9/8) / (25/8) = 0.36
  CHECK(mu_sharp(d, q, 1.0) == doctest::Approx(0.36).epsilon(1e-10));
  CHECK(mu_sharp(d, q, 12.0) == doctest::Approx(4.32).epsilon(1e-10));
  CHECK(mu_sharp(d, q, 2.0) == doctest::Approx(2.0 * mu_sharp(d, q, 1.0)).epsilon(1e-15));

  // figure weight on [0,8] at lambda = 12: adaptive-quadrature oracle
  WeightSpec w8 = figure_weight_8();
  NodalDecomposition d8 = decompose(w8);
  WeightQuadratures q8 = quadratures(w8, d8, 1e-12);
  double plus = 9.0 / 8.0 + 2.0 + 0.2 * (8.0 - 2 * M_PI);  // closed forms per interval
  double minus = 25.0 / 8.0 + 2.0;
  CHECK(q8.a_plus_L1 == doctest::Approx(plus).epsilon(1e-10));
  CHECK(q8.a_minus_L1 == doctest::Approx(minus).epsilon(1e-10));
  double ms = mu_sharp(d8, q8, 12.0);
  CHECK(ms == doctest::Approx(12.0 * plus / minus).epsilon(1e-10));
  CHECK(ms == doctest::Approx(8.12).epsilon(2e-3));  // desk value
}

TEST_CASE("mu_sharp: symmetric weight gives 1 at lambda = 1") {
  NodalDecomposition d = decompose(sine_weight());
  WeightQuadratures q = quadratures(sine_weight(), d, 1e-12);
  CHECK(mu_sharp(d, q, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("tiling invariant") {
  for (const WeightSpec& w : {figure_weight_8(), figure_weight_pi(), sine_weight()}) {
    NodalDecomposition d = decompose(w, 1e-10);
    double total = d.leading_neg ? d.neg(-1).length() : 0.0;
    for (int i = 0; i < d.m; ++i) {
      total += d.pos(i).length();
      if (!d.neg(i).empty()) total += d.neg(i).length();
    }
    CHECK(total == doctest::Approx(w.period).epsilon(1e-9));
  }
}

TEST_CASE("tabulated pieces interpolate linearly") {
  WeightSpec w;
  w.period = 2.0;
  w.bc_profile = BcProfile::periodic;
  WeightPiece p;
  p.x0 = 0;
  p.x1 = 2;
  p.table = {{0.0, 1.0}, {1.0, 1.0}, {1.25, -1.0}, {2.0, -1.0}};
  w.pieces = {std::move(p)};
  CHECK(w.eval(0.5) == doctest::Approx(1.0));
  CHECK(w.eval(1.125) == doctest::Approx(0.0).epsilon(1e-12));
  NodalDecomposition d = decompose(w, 1e-10);
  CHECK(d.m == 1);
  CHECK(d.tau[0] == doctest::Approx(1.125).epsilon(1e-8));
}
