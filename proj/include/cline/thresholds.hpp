#pragma once

// Every explicit constant of the multiplicity machinery: the no-solution
// level lambda*(rho), the height bounds r_bar and R_bar, the trap level
// R_eps, and the mu*(lambda, r, R) ledger with all of its sub-constants.
// Conventions: interval indices are cyclic for the periodic profile
// (I_0^- = I_m^- - P and so on); for the Dirichlet/Neumann profile entries
// that reference a missing interval are skipped and recorded.

#include <string>
#include <vector>

#include "cline/integrator.hpp"
#include "cline/nonlinearity.hpp"
#include "cline/weight.hpp"

namespace cline {

struct LambdaStarCert {
  double rho = 0.0;
  double epsilon = 0.0;
  std::vector<double> delta;       // delta_i = eps / (eps + e^{2|c| |I_i^+|} |I_i^+|)
  std::vector<double> eta;         // min of g on [delta_i rho, rho]
  std::vector<double> per_interval;  // candidate value per positivity interval
  double lambda_star = 0.0;
};

// Evaluates the certificate over eps_grid (empty: geometric grid
// l_min/2^k, k = 1..12) and returns the admissible eps minimizing
// lambda_star. Throws NoAdmissibleEpsilon.
LambdaStarCert lambda_star(double rho, const ProblemParams& params,
                           std::vector<double> eps_grid = {});

// Largest r (bisection grid) with
//   zeta(r) < 1 / (2 lambda max_i e^{|c| L_i} L_i ||a||_{L1(I_i^+)}),
// where L_i is the length of I_{i-1}^- u I_i^+ u I_i^-. Requires (g0).
double r_bar(const ProblemParams& params, double lambda);

// R_eps = 1 - eps e^{-(K ||b||_{L1(J)} + (1+2|c|) |J|)/2}, pure formula.
double r_eps_formula(double eps, double K, double c, double J_length, double b_L1);
// Same with K = lipschitz_at_one(g).
double r_eps(double eps, double c, const Nonlinearity& g, double J_length, double b_L1);

// eps = (1-d) / (1 + max_i |I_i^-| e^{|c||I_i^-|}), then
// R_bar = max_i R_eps(eps, c, g, |I_i^+|, lambda ||a^+||_{L1(I_i^+)}).
double R_bar(double d, const ProblemParams& params);

struct MuStarLedger {
  double lambda = 0.0, r = 0.0, rho = 0.0, R = 0.0;
  std::vector<double> mu_hat_r, mu_hat_l;   // escape levels from max = r, right/left
  std::vector<double> mu_check_r;           // escape level from max = R (homotopy-free)
  std::vector<double> mu_tilde_r, mu_tilde_l;
  std::vector<double> mu_star_plus, mu_star_minus;
  std::vector<double> mu_bar;
  double mu_H1 = 0.0, mu_H3 = 0.0;
  double mu_sharp = 0.0;
  double mu_star = 0.0;
  // range statistics used (after conservative rounding)
  double zeta_r = 0.0, gamma_r = 0.0, Gamma_R = 0.0, chi_rR = 0.0, chi_rhoR = 0.0;
  // theorem-hypothesis record (informative, not enforced)
  double lambda_star_rho = 0.0, r_bar_val = 0.0, R_bar_rho = 0.0;
  bool hyp_lambda = false, hyp_r = false, hyp_R = false;
  std::vector<std::string> skipped;  // entries skipped for missing intervals

  std::vector<std::pair<std::string, double>> flatten() const;  // one constant per line
};

// Evaluates the full ledger. Ordering 0 < r < rho < R < 1 is enforced
// (PreconditionViolated names the failed inequality); the theorem hypotheses
// r <= r_bar, R >= R_bar(rho), lambda > lambda*(rho) are evaluated and
// recorded but do not abort, since the certified region is far from the
// desk-scale parameter values the reproductions use.
MuStarLedger mu_star(double lambda, double r, double rho, double R,
                     const ProblemParams& params, int grid_n = 4096);

}  // namespace cline
