#include <doctest.h>

#include <cmath>

#include "cline/errors.hpp"
#include "cline/solver.hpp"
#include "test_helpers.hpp"

using namespace cline;
using namespace testutil;

TEST_CASE("residual: equilibria give zero for all boundary conditions") {
  auto fx = figpi_fixture();
  BoundaryCondition per{BcKind::periodic, 1, 0.0};
  BoundaryCondition neu{BcKind::neumann, 1, 0.0};
  BoundaryCondition dir{BcKind::dirichlet, 1, 0.0};
  for (double r : residual(per, {0.0, 0.0}, fx->params, 1e-3)) CHECK(std::abs(r) < 1e-12);
  for (double r : residual(per, {1.0, 0.0}, fx->params, 1e-3)) CHECK(std::abs(r) < 1e-12);
  CHECK(std::abs(residual(neu, {0.0}, fx->params, 1e-3)[0]) < 1e-12);
  CHECK(std::abs(residual(dir, {0.0}, fx->params, 1e-3)[0]) < 1e-12);
}

TEST_CASE("residual: neumann constant solution when the weight is irrelevant") {
  // a ~ 0: any constant solves u'' + c u' = 0 with u'(0) = 0
  WeightSpec w;
  w.period = 1.0;
  w.bc_profile = BcProfile::periodic;
  WeightPiece p1;
  p1.x0 = 0;
  p1.x1 = 0.5;
  p1.expr = Expr::parse("1e-30");
  WeightPiece p2;
  p2.x0 = 0.5;
  p2.x1 = 1;
  p2.expr = Expr::parse("-1e-30");
  w.pieces = {std::move(p1), std::move(p2)};
  Fixture fx(std::move(w), Nonlinearity::make_builtin(BuiltinG::logistic_dominant), 1.0, 1.0, 1.0);
  BoundaryCondition neu{BcKind::neumann, 1, 0.0};
  CHECK(std::abs(residual(neu, {0.4}, fx.params, 1e-3)[0]) < 1e-12);
}

TEST_CASE("newton: trivial equilibria are rejected as StuckAtBoundary") {
  auto fx = figpi_fixture();
  BoundaryCondition neu{BcKind::neumann, 1, 0.0};
  NewtonOptions opts;
  opts.allow_multishoot = false;
  CHECK_THROWS_AS(newton(neu, {0.0}, fx->params, opts), Error);
  CHECK_THROWS_AS(newton(neu, {1.0}, fx->params, opts), Error);
}

TEST_CASE("newton: two Neumann solutions on [0,pi] at lambda = mu = 12") {
  auto fx = figpi_fixture(1.0, 12.0, 12.0);
  BoundaryCondition neu{BcKind::neumann, 1, 0.0};
  NewtonOptions opts;
  opts.h = 1e-3;
  // seeds bracketing the two branches (desk values from the scan)
  SolutionProfile large = newton(neu, {0.93}, fx->params, opts);
  CHECK(large.interior);
  CHECK(large.residual < 1e-10);
  CHECK(large.traj.max_u() > 0.5);
  CHECK(large.traj.max_u() < 1.0);
  // boundary conditions hold on the certified trajectory
  CHECK(std::abs(large.traj.v.front()) < 1e-12);
  CHECK(std::abs(large.traj.v.back()) < 1e-9);

  SolutionProfile small = newton(neu, {0.12}, fx->params, opts);
  CHECK(small.interior);
  CHECK(small.traj.max_u() < 0.5);
  CHECK(profile_distance(small, large) > 1e-3);
}

TEST_CASE("newton: periodic solve and re-integration over two periods") {
  auto fx = figpi_fixture(1.0, 12.0, 12.0);
  BoundaryCondition per{BcKind::periodic, 1, 0.0};
  NewtonOptions opts;
  opts.h = 1e-3;
  SolutionProfile prof;
  bool got = false;
  for (double u0 : {0.9, 0.85, 0.95, 0.8}) {
    if (got) break;
    for (double v0 : {0.0, 0.3, -0.3, 0.6}) {
      try {
        prof = newton(per, {u0, v0}, fx->params, opts);
        if (prof.interior && prof.traj.max_u() > 0.5) {
          got = true;
          break;
        }
      } catch (const Error&) {
      }
    }
  }
  REQUIRE(got);
  // u(x + P) = u(x) under re-integration over [0, 2P]
  IntegrateOptions io;
  io.h = 1e-3;
  Trajectory two =
      integrate(fx->params, 0.0, 2 * M_PI, prof.traj.u.front(), prof.traj.v.front(), io);
  double worst = 0.0;
  for (double x = 0.0; x <= M_PI; x += 0.01)
    worst = std::max(worst, std::abs(two.u_at(x) - two.u_at(x + M_PI)));
  CHECK(worst < 1e-7);
}

TEST_CASE("multiple shooting agrees with single shooting") {
  auto fx = figpi_fixture(1.0, 12.0, 12.0);
  BoundaryCondition neu{BcKind::neumann, 1, 0.0};
  NewtonOptions opts;
  opts.h = 1e-3;
  SolutionProfile single = newton(neu, {0.93}, fx->params, opts);
  SolutionProfile multi = solve_multishoot(neu, path_from_profile(single), fx->params, opts);
  // segment steps differ from the one-shot step, so agreement is at the
  // integration-accuracy level
  CHECK(profile_distance(single, multi) < 1e-6);
  CHECK(multi.residual < 1e-9);
}

TEST_CASE("multiple shooting from a synthesized band path (periodic)") {
  auto fx = figpi_fixture(1.0, 12.0, 80.0);
  BoundaryCondition per{BcKind::periodic, 1, 0.0};
  Bands bands{0.05, 0.5, 0.99};
  NewtonOptions opts;
  opts.h = 1e-3;
  MsPath path = synth_band_path(per, fx->params, bands, {2});
  SolutionProfile prof = solve_multishoot(per, path, fx->params, opts);
  CHECK(prof.interior);
  CHECK(prof.band_maxima.size() == 1);
  CHECK(prof.band_maxima[0] > 0.5);
}

TEST_CASE("classification: bins, zero string, margins") {
  SolutionProfile p;
  Bands bands{0.1, 0.5, 0.9, 1e-6};
  p.band_maxima = {0.95 * 0.5, 0.5 * 0.1, 0.5 + 0.9 * 0.4};
  CHECK(classify(p, bands) == std::vector<int>{1, 0, 2});
  p.band_maxima = {0.05, 0.05, 0.05};
  CHECK(classify(p, bands) == std::vector<int>{0, 0, 0});  // the excluded zero string is data
  p.band_maxima = {0.5};
  CHECK_THROWS_AS(classify(p, bands), Error);  // exactly rho: margin rule
  p.band_maxima = {0.95};
  CHECK_THROWS_AS(classify(p, bands), Error);  // above R
  CHECK(classify(p, bands, false) == std::vector<int>{2});  // soft binning while scanning
}

TEST_CASE("multi_start_seeds: bands drive the seed grids") {
  auto fx = figpi_fixture();
  Bands bands{0.1, 0.5, 0.9};
  BoundaryCondition neu{BcKind::neumann, 1, 0.0};
  auto seeds = multi_start_seeds({2}, neu, fx->params, bands, 8);
  CHECK(seeds.size() == 8);
  for (const auto& s : seeds) {
    CHECK(s.size() == 1);
    CHECK(s[0] > bands.rho);
    CHECK(s[0] < bands.R);
  }
  auto seeds1 = multi_start_seeds({1, 0, 2}, neu, fx->params, bands, 8);
  for (const auto& s : seeds1) {
    CHECK(s[0] > bands.r);
    CHECK(s[0] < bands.rho);
  }
  BoundaryCondition per{BcKind::periodic, 1, 0.0};
  auto seeds2 = multi_start_seeds({1}, per, fx->params, bands, 9);
  CHECK(seeds2.size() >= 9);
  CHECK(seeds2[0].size() == 2);
  CHECK_THROWS_AS(multi_start_seeds({0, 0}, neu, fx->params, bands, 8), Error);
}

TEST_CASE("positivity intervals across multi-period spans") {
  auto fx = figpi_fixture();
  auto pos1 = positivity_intervals(fx->decomp, 0.0, M_PI);
  CHECK(pos1.size() == 1);
  auto pos3 = positivity_intervals(fx->decomp, -M_PI, 2 * M_PI);
  CHECK(pos3.size() == 3);
  CHECK(pos3[0].lo == doctest::Approx(-M_PI));
  CHECK(pos3[1].lo == doctest::Approx(0.0));
  auto fx8 = fig8_fixture();
  CHECK(positivity_intervals(fx8->decomp, 0.0, 8.0).size() == 3);
  CHECK(negativity_intervals(fx8->decomp, 0.0, 8.0).size() == 2);
}
