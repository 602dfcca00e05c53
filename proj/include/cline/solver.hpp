#pragma once

// Shooting formulation of the periodic, Neumann, and Dirichlet problems.
// Single shooting with the variational Jacobian is the primary Newton path;
// a multiple-shooting corrector over breakpoint-aligned segments takes over
// when the span or the parameters make the one-shot flow map too expanding
// for double precision (long spans, very large mu).

#include <optional>
#include <string>
#include <vector>

#include "cline/integrator.hpp"

namespace cline {

enum class BcKind { periodic, neumann, dirichlet };

const char* bc_kind_name(BcKind k);
BcKind bc_kind_from_string(const std::string& s);

struct BoundaryCondition {
  BcKind kind = BcKind::periodic;
  int k = 1;          // span = k*P for periodic; k = 1 for Neumann/Dirichlet
  double x0 = 0.0;    // left end (chaos windows use -n*P)

  double span(double P) const { return kind == BcKind::periodic ? k * P : P; }
  double x1(double P) const { return x0 + span(P); }
  void validate() const;
};

struct Bands {
  double r = 0.0, rho = 0.0, R = 0.0;
  double margin = 1e-6;  // maxima within margin of a threshold are unclassifiable
};

struct SolutionProfile {
  BoundaryCondition bc;
  double c = 0.0, lambda = 0.0, mu = 0.0;
  std::string weight_id, g_id;
  Trajectory traj;
  double residual = -1.0;           // boundary + matching residual (max norm)
  std::vector<double> band_maxima;  // per positivity interval across the span
  std::vector<int> symbols;         // classification; empty when not classified
  bool interior = false;            // 0 < u < 1 strictly on all nodes
  std::optional<double> nu0;        // principal eigenvalue, when computed
  std::string stability;            // "stable" / "unstable" / ""

  std::string symbol_string() const;
};

// Positivity intervals of the weight covered by [x0, x1], in order
// (period-shifted copies included).
std::vector<Interval> positivity_intervals(const NodalDecomposition& d, double x0, double x1);
std::vector<Interval> negativity_intervals(const NodalDecomposition& d, double x0, double x1);

// Boundary residual of a shot: periodic -> (u(x1)-u(x0), v(x1)-v(x0));
// Neumann -> (u'(P)) shooting from (u0, 0); Dirichlet -> (u(P)) from (0, v0).
// The truncated right-hand side is used.
std::vector<double> residual(const BoundaryCondition& bc, const std::vector<double>& y0,
                             const ProblemParams& params, double h);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double h = 0.0;                 // integration step; 0 = span/4000
  double interior_tol = 1e-8;     // StuckAtBoundary threshold
  bool allow_multishoot = true;   // fall back to the segment corrector
  double ms_segment_len = 0.8;
};

// Damped Newton on the shooting residual. On success re-integrates in raw
// mode to certify interiority and measure band maxima. Throws Diverged or
// StuckAtBoundary.
SolutionProfile newton(const BoundaryCondition& bc, const std::vector<double>& seed,
                       const ProblemParams& params, const NewtonOptions& opts = {});

// Piecewise path used to seed the multiple-shooting corrector.
struct MsPath {
  std::vector<double> nodes;
  std::vector<double> u, v;
};

// Multiple shooting over breakpoint-aligned segments; `guess` is sampled at
// the segment nodes. Throws Diverged / StuckAtBoundary like newton().
SolutionProfile solve_multishoot(const BoundaryCondition& bc, const MsPath& guess,
                                 const ProblemParams& params, const NewtonOptions& opts = {});

// Initial path whose humps match the target symbols (used for the periodic
// and subharmonic searches).
MsPath synth_band_path(const BoundaryCondition& bc, const ProblemParams& params,
                       const Bands& bands, const std::vector<int>& symbols);
MsPath path_from_profile(const SolutionProfile& p);

// Per-interval classification against the bands; 0/1/2 per positivity
// interval. With `strict` the margin rule applies and Unclassifiable is
// thrown; otherwise maxima are binned hard (used while scanning).
std::vector<int> classify(const SolutionProfile& profile, const Bands& bands, bool strict = true);

// Measures band maxima on the profile's trajectory (refreshes the field).
void measure_bands(SolutionProfile& profile, const NodalDecomposition& d);

// Seed grid reflecting the singular structure of a coded target: Neumann and
// Dirichlet get scalar grids bracketing the first coded interval's band;
// periodic gets a 2-D grid of (u(0), u'(0)).
std::vector<std::vector<double>> multi_start_seeds(const std::vector<int>& symbols,
                                                   const BoundaryCondition& bc,
                                                   const ProblemParams& params,
                                                   const Bands& bands, int budget);

// Max-norm distance on the common node grid (profiles of equal span).
double profile_distance(const SolutionProfile& a, const SolutionProfile& b);

}  // namespace cline
