#pragma once

// Linear stability of a steady profile: the principal eigenvalue nu0 of
//   v'' + c v' + (nu + a_{lambda,mu}(x) g'(u(x))) v = 0
// under the profile's boundary conditions. Stable when nu0 >= 0. The notion
// is the parabolic one (c = 0 in the sources it follows); for c != 0 the
// same computation runs on the weighted self-adjoint form and the result is
// marked "extended convention".

#include <string>
#include <vector>

#include "cline/solver.hpp"

namespace cline {

enum class StabilityMethod { sturm_shoot, hill_discriminant };

struct StabilityResult {
  double nu0 = 0.0;
  std::string label;  // "stable" (nu0 >= 0) or "unstable"
  StabilityMethod method = StabilityMethod::sturm_shoot;
  std::string convention;  // "" or "extended (c != 0)"
};

struct StabilityOptions {
  double nu_max = 1e3;     // bracketing window [-nu_max, nu_max]
  double bisect_tol = 1e-8;
  double march_step = 0.2;  // scan step when bracketing the first eigenvalue
};

// Dirichlet/Neumann: bisection on the shooting function, selecting the
// eigenvalue whose eigenfunction has no interior node; periodic: bisection
// on the Hill discriminant (trace of the period map), principal = smallest
// nu with trace = 2 (c = 0; the c != 0 extension matches multiplier 1).
// Throws NotConverged when no bracket exists within the window.
StabilityResult principal_eigenvalue(const SolutionProfile& profile,
                                     const ProblemParams& params,
                                     const StabilityOptions& opts = {});

// Second-order finite-difference oracle for the same eigenvalue (c = 0 only;
// test/cross-check path). n is the number of grid cells.
double principal_eigenvalue_fd(const SolutionProfile& profile, const ProblemParams& params,
                               int n = 2000);

// The eigenfunction at nu, sampled on the profile grid (used to verify
// positivity of the principal eigenfunction).
std::vector<double> eigenfunction(const SolutionProfile& profile, const ProblemParams& params,
                                  double nu);

}  // namespace cline
