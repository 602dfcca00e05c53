#pragma once

// Small numerical kernels shared across modules: adaptive quadrature,
// scalar root bracketing/bisection, and golden-section extremum polish.

#include <functional>

namespace cline {

using ScalarFn = std::function<double(double)>;

// Adaptive Gauss-Kronrod (G7,K15) quadrature on [a,b].
// Terminates when the local error estimate is below
// rel_tol * |integral| + abs_floor on every panel; throws QuadratureFailure
// when the recursion depth is exhausted without convergence.
double integrate_adaptive(const ScalarFn& f, double a, double b, double rel_tol,
                          double abs_floor = 1e-300);

// Bisection on a bracketing interval [a,b] with f(a)*f(b) <= 0, to absolute
// tolerance xtol on the abscissa. Returns the midpoint of the final bracket.
double bisect(const ScalarFn& f, double a, double b, double xtol, int max_iter = 200);

// Golden-section refinement of a maximum (or minimum) of f around grid point
// index k of a uniform grid [lo, hi] with n points. Returns the refined
// extremum value; xtol controls the abscissa tolerance.
double golden_max(const ScalarFn& f, double lo, double hi, double xtol);
double golden_min(const ScalarFn& f, double lo, double hi, double xtol);

// Scan [lo,hi] with n samples and polish the best candidate by golden section
// over the two adjacent grid cells.
double grid_max(const ScalarFn& f, double lo, double hi, int n, double xtol);
double grid_min(const ScalarFn& f, double lo, double hi, int n, double xtol);

}  // namespace cline
