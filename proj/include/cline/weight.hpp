#pragma once

// The P-periodic sign-changing weight a(x): piecewise closed-form or
// tabulated definition on [0,P], nodal decomposition into alternating
// positivity/negativity intervals, and the weight-derived quadratures used
// by every threshold formula.

#include <optional>
#include <string>
#include <vector>

#include "cline/expr.hpp"

namespace cline {

enum class BcProfile { periodic, dirichlet, neumann };

const char* bc_profile_name(BcProfile p);
BcProfile bc_profile_from_string(const std::string& s);

struct WeightPiece {
  double x0 = 0.0, x1 = 0.0;
  Expr expr;                                       // analytic piece, or
  std::vector<std::pair<double, double>> table;    // tabulated (x, a(x)), linearly interpolated
  bool tabulated() const { return !table.empty(); }
  double eval(double x) const;
};

struct WeightSpec {
  double period = 0.0;
  std::vector<WeightPiece> pieces;  // must tile [0, period] in order
  BcProfile bc_profile = BcProfile::periodic;
  std::string id = "weight";

  // Checks tiling and basic sanity; throws Error(validation).
  void validate() const;

  // Evaluates a(x) for x in [0, period]; boundary x may fall on either piece.
  double eval(double x) const;
  // Periodic extension to all of R.
  double eval_periodic(double x) const;
  // Wraps x into [0, period).
  double wrap(double x) const;
};

struct Interval {
  double lo = 0.0, hi = 0.0;
  double length() const { return hi - lo; }
  bool empty() const { return hi <= lo; }
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

// Alternating decomposition [0,P] = I_1^+ u I_1^- u ... u I_m^+ u I_m^-.
// The periodic profile starts with a positivity interval at x = 0 and ends
// with a negativity interval at P; for the Dirichlet/Neumann profile an
// initial negativity interval and a missing final one are both allowed.
struct NodalDecomposition {
  int m = 0;                    // number of positivity intervals
  std::vector<double> sigma;    // sigma[i] = left end of I_{i+1}^+, size m+1 with sigma[m] = right end of I_m^-
  std::vector<double> tau;      // tau[i] = right end of I_{i+1}^+, size m
  bool leading_neg = false;     // I_0^- = [0, sigma[0]] present
  double period = 0.0;
  BcProfile bc_profile = BcProfile::periodic;
  bool cyclic = false;          // periodic profile: index arithmetic wraps with a P-shift
  std::vector<Interval> zero_plateaus;  // intervals of identically-zero weight merged into a neighbor

  Interval pos(int i) const { return {sigma[i], tau[i]}; }       // I_{i+1}^+, 0-based i
  Interval neg(int i) const;                                     // I_{i+1}^-; i = -1 gives the leading one
  bool has_neg(int i) const;                                     // negativity interval present (cyclic-aware)
  int wrap_index(int i) const;                                   // cyclic index into [0, m)
};

// Locates the sign changes of the weight to absolute tolerance sign_tol and
// arranges them per the declared profile. Throws NoSignChange or
// NonAlternating.
NodalDecomposition decompose(const WeightSpec& spec, double sign_tol = 1e-10);

struct WeightQuadratures {
  double a_plus_L1 = 0.0;   // int_0^P a^+
  double a_minus_L1 = 0.0;  // int_0^P a^-
  std::vector<double> pos_L1;    // ||a||_L1(I_i^+)
  std::vector<double> neg_L1;    // ||a||_L1(I_i^-)
  std::vector<double> A_r_L1;    // ||A_i^r||_L1(I_i^-), A_i^r(x) = int_{tau_i}^x a^-
  std::vector<double> A_l_L1;    // ||A_i^l||_L1(I_i^-), A_i^l(x) = int_x^{sigma_{i+1}} a^-
  std::vector<double> pos_sign_defect;  // int_{I_i^+} a^-  (should vanish)
  std::vector<double> neg_sign_defect;  // int_{I_i^-} a^+
  double leading_neg_L1 = 0.0;          // ||a||_L1(I_0^-) when present
};

// Per-piece adaptive quadrature so integrand kinks at breakpoints are never
// straddled; every entry accurate to relative tolerance quad_tol.
WeightQuadratures quadratures(const WeightSpec& spec, const NodalDecomposition& decomp,
                              double quad_tol = 1e-10);

// lambda * (int a^+) / (int a^-); the mean of lambda a^+ - mu a^- over one
// period is negative exactly when mu exceeds the returned value.
double mu_sharp(const NodalDecomposition& decomp, const WeightQuadratures& quad, double lambda);

// Integral of a over [lo, hi] (no sign splitting), breakpoint-aware.
double integrate_weight(const WeightSpec& spec, double lo, double hi, double rel_tol = 1e-12);
// Integrals of a^+ and a^- over [lo, hi].
double integrate_weight_pos(const WeightSpec& spec, double lo, double hi, double rel_tol = 1e-12);
double integrate_weight_neg(const WeightSpec& spec, double lo, double hi, double rel_tol = 1e-12);

}  // namespace cline
