#pragma once

// Shared fixtures: the two production weights (the figure weight on [0,8]
// and its one-period restriction to [0,pi]) and simple constant weights.

#include <cmath>
#include <memory>

#include "cline/integrator.hpp"
#include "cline/nonlinearity.hpp"
#include "cline/weight.hpp"

namespace testutil {

using namespace cline;

// a(x) = 2 sin(2x) - max(0, sin x) on [0, 2pi], 0.2 on [2pi, 8]; Neumann
// profile with a trailing positivity interval (m = 3).
inline WeightSpec figure_weight_8() {
  WeightSpec w;
  w.period = 8.0;
  w.bc_profile = BcProfile::neumann;
  w.id = "fig_weight_8";
  WeightPiece p1;
  p1.x0 = 0.0;
  p1.x1 = 2.0 * M_PI;
  p1.expr = Expr::parse("2*sin(2*x) - max(0, sin(x))");
  WeightPiece p2;
  p2.x0 = 2.0 * M_PI;
  p2.x1 = 8.0;
  p2.expr = Expr::parse("0.2");
  w.pieces = {std::move(p1), std::move(p2)};
  return w;
}

// Same formula restricted to [0, pi]: a = sin(x)(4cos(x) - 1), m = 1.
inline WeightSpec figure_weight_pi(BcProfile profile = BcProfile::neumann) {
  WeightSpec w;
  w.period = M_PI;
  w.bc_profile = profile;
  w.id = "fig_weight_pi";
  WeightPiece p;
  p.x0 = 0.0;
  p.x1 = M_PI;
  p.expr = Expr::parse("2*sin(2*x) - max(0, sin(x))");
  w.pieces = {std::move(p)};
  return w;
}

// sin weight on [0, 2pi]: one positivity and one negativity interval.
inline WeightSpec sine_weight() {
  WeightSpec w;
  w.period = 2.0 * M_PI;
  w.bc_profile = BcProfile::periodic;
  w.id = "sine";
  WeightPiece p;
  p.x0 = 0.0;
  p.x1 = 2.0 * M_PI;
  p.expr = Expr::parse("sin(x)");
  w.pieces = {std::move(p)};
  return w;
}

// Holds the weight, decomposition and nonlinearity together so ProblemParams
// pointers stay valid.
struct Fixture {
  WeightSpec weight;
  NodalDecomposition decomp;
  Nonlinearity g;
  ProblemParams params;

  Fixture(WeightSpec w, Nonlinearity gg, double c, double lambda, double mu)
      : weight(std::move(w)), g(std::move(gg)) {
    decomp = decompose(weight);
    params.c = c;
    params.lambda = lambda;
    params.mu = mu;
    params.weight = &weight;
    params.decomp = &decomp;
    params.g = &g;
    params.truncated = true;
  }
};

inline std::unique_ptr<Fixture> fig8_fixture(double c = 1.0, double lambda = 12.0,
                                             double mu = 80.0) {
  return std::make_unique<Fixture>(figure_weight_8(),
                                   Nonlinearity::make_builtin(BuiltinG::logistic_dominant), c,
                                   lambda, mu);
}

inline std::unique_ptr<Fixture> figpi_fixture(double c = 1.0, double lambda = 12.0,
                                              double mu = 12.0,
                                              BcProfile profile = BcProfile::neumann) {
  return std::make_unique<Fixture>(figure_weight_pi(profile),
                                   Nonlinearity::make_builtin(BuiltinG::logistic_dominant), c,
                                   lambda, mu);
}

constexpr double kTau1 = 1.3181160716528177;  // arccos(1/4)

}  // namespace testutil
