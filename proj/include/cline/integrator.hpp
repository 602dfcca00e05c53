#pragma once

// Fixed-step classical RK4 for u'' + c u' + F(x,u) = 0 written as a first
// order system, with steps aligned so that every weight breakpoint is a node
// (the right-hand side is smooth between breakpoints). Optionally propagates
// the 2x2 variational block for shooting Jacobians.
//
// F is either the raw a_{lambda,mu}(x) g(u) (defined for u in [0,1] only) or
// its truncation: -u below 0, a_{lambda,mu} g(u) on [0,1], 0 above 1.

#include <array>
#include <vector>

#include "cline/nonlinearity.hpp"
#include "cline/weight.hpp"

namespace cline {

struct ProblemParams {
  double c = 0.0;
  double lambda = 1.0;
  double mu = 1.0;
  const WeightSpec* weight = nullptr;
  const NodalDecomposition* decomp = nullptr;
  const Nonlinearity* g = nullptr;
  bool truncated = true;

  void validate() const;
  double a_lm(double x) const;  // lambda a^+(x) - mu a^-(x), periodically extended
};

// Right-hand side of the first-order system: returns (u', -c u' - F(x,u)).
// Raw mode throws DomainError when u leaves [0,1].
std::array<double, 2> rhs(double x, double u, double uprime, const ProblemParams& params);

// d/du of the forcing term (truncation seams use the interior one-sided value).
double forcing_du(double x, double u, const ProblemParams& params);

struct StepStats {
  double h = 0.0;              // requested step
  double endpoint_delta = -1;  // |change| under one halving, when measured
  long n_steps = 0;
};

struct Trajectory {
  std::vector<double> x, u, v;
  bool has_var = false;
  std::array<double, 4> var{1, 0, 0, 1};  // row-major d(u,v)(x1)/d(u,v)(x0)
  StepStats stats;

  double x0() const { return x.front(); }
  double x1() const { return x.back(); }
  double u_end() const { return u.back(); }
  double v_end() const { return v.back(); }
  double u_at(double xq) const;  // linear interpolation
  double v_at(double xq) const;
  double min_u() const;
  double max_u() const;
};

struct IntegrateOptions {
  double h = 0.0;            // 0: (x1-x0)/4000
  bool with_variational = false;
  double overflow_bound = 1e8;
};

Trajectory integrate(const ProblemParams& params, double x0, double x1, double u0,
                     double v0, const IntegrateOptions& opts = {});

// Halves h until two successive endpoint states agree to agree_tol (both
// components), starting from h0 (default (x1-x0)/4000).
Trajectory integrate_refined(const ProblemParams& params, double x0, double x1, double u0,
                             double v0, bool with_variational, double h0 = 0.0,
                             double agree_tol = 1e-10, int max_halvings = 12);

// Maximum of the sampled u over [iv.lo, iv.hi], refined by quadratic
// interpolation through the three nodes bracketing the discrete argmax.
// Throws CoverageError when the trajectory does not cover the interval.
struct IntervalMax {
  double x_star;
  double u_max;
};
IntervalMax max_on_interval(const Trajectory& traj, const Interval& iv);

}  // namespace cline
