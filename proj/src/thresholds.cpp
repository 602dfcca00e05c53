#include "cline/thresholds.hpp"

#include <algorithm>
#include <cmath>

#include "cline/errors.hpp"
#include "cline/numerics.hpp"

namespace cline {

namespace {

constexpr double kStatRound = 1e-12;

// min of g over [lo,hi], rounded down (certificates need a lower bound)
double min_g(const Nonlinearity& g, double lo, double hi) {
  double v = grid_min([&](double u) { return g(u); }, lo, hi, 4096, kStatRound);
  double w = v - 1e-9 * (1.0 + std::abs(v));
  return (v >= 0.0 && w < 0.0) ? 0.0 : w;
}

}  // namespace

LambdaStarCert lambda_star(double rho, const ProblemParams& params,
                           std::vector<double> eps_grid) {
  params.validate();
  if (!(rho > 0.0 && rho < 1.0)) fail(Errc::validation, "lambda_star: rho must lie in (0,1)");
  const NodalDecomposition& d = *params.decomp;
  const double c = std::abs(params.c);

  double lmin = d.pos(0).length();
  for (int i = 1; i < d.m; ++i) lmin = std::min(lmin, d.pos(i).length());
  if (eps_grid.empty())
    for (int k = 1; k <= 12; ++k) eps_grid.push_back(lmin / std::pow(2.0, k));

  LambdaStarCert best;
  bool found = false;
  for (double eps : eps_grid) {
    if (!(eps > 0.0) || eps >= lmin / 2.0) continue;
    LambdaStarCert cert;
    cert.rho = rho;
    cert.epsilon = eps;
    bool admissible = true;
    double worst = 0.0;
    for (int i = 0; i < d.m; ++i) {
      Interval ip = d.pos(i);
      double shrunk = integrate_weight_pos(*params.weight, ip.lo + eps, ip.hi - eps, 1e-12);
      if (!(shrunk > 0.0)) {
        admissible = false;
        break;
      }
      double L = ip.length();
      double delta = eps / (eps + std::exp(2.0 * c * L) * L);
      double eta = min_g(*params.g, delta * rho, rho);
      if (!(eta > 0.0)) {
        admissible = false;
        break;
      }
      double cand = rho * (eps * c + 2.0 * std::exp(c * L)) / (eps * eta * shrunk);
      cert.delta.push_back(delta);
      cert.eta.push_back(eta);
      cert.per_interval.push_back(cand);
      worst = std::max(worst, cand);
    }
    if (!admissible) continue;
    cert.lambda_star = worst;
    if (!found || cert.lambda_star < best.lambda_star) {
      best = cert;
      found = true;
    }
  }
  if (!found)
    fail(Errc::no_admissible_epsilon,
         "lambda_star: no eps in the grid satisfies both admissibility constraints");
  return best;
}

namespace {

// length of I_{i-1}^- u I_i^+ u I_i^- with missing pieces dropped
double triple_len(const NodalDecomposition& d, int i) {
  double len = d.pos(i).length();
  if (d.cyclic) {
    len += d.neg(d.wrap_index(i - 1)).length();
    len += d.neg(i).length();
  } else {
    if (d.has_neg(i - 1)) len += d.neg(i - 1).length();
    if (d.has_neg(i)) len += d.neg(i).length();
  }
  return len;
}

}  // namespace

double r_bar(const ProblemParams& params, double lambda) {
  params.validate();
  if (!params.g->has_g0()) fail(Errc::g0_required, "r_bar requires the (g0) condition");
  const NodalDecomposition& d = *params.decomp;
  WeightQuadratures q = quadratures(*params.weight, d, 1e-12);
  const double c = std::abs(params.c);
  double denom = 0.0;
  for (int i = 0; i < d.m; ++i) {
    double L = triple_len(d, i);
    denom = std::max(denom, std::exp(c * L) * L * q.pos_L1[i]);
  }
  double bound = 1.0 / (2.0 * lambda * denom);
  auto ok = [&](double r) { return zeta_stat(*params.g, r) < bound; };
  // descending grid, then bisection refinement against the first violation
  double r_lo = 0.0, r_hi = 1.0 - 1e-9;
  for (double r = 1.0 - 1e-9; r > 1e-300; r /= 2.0) {
    if (ok(r)) {
      r_lo = r;
      break;
    }
    r_hi = r;
  }
  if (r_lo == 0.0) fail(Errc::not_converged, "r_bar: no admissible r found");
  if (r_lo >= r_hi) return r_lo;
  for (int it = 0; it < 80 && (r_hi - r_lo) > 1e-14 * r_hi; ++it) {
    double mid = 0.5 * (r_lo + r_hi);
    (ok(mid) ? r_lo : r_hi) = mid;
  }
  return r_lo;
}

double r_eps_formula(double eps, double K, double c, double J_length, double b_L1) {
  return 1.0 - eps * std::exp(-0.5 * (K * b_L1 + (1.0 + 2.0 * std::abs(c)) * J_length));
}

double r_eps(double eps, double c, const Nonlinearity& g, double J_length, double b_L1) {
  if (!(eps > 0.0 && eps < 1.0)) fail(Errc::validation, "r_eps: eps must lie in (0,1)");
  return r_eps_formula(eps, lipschitz_at_one(g), c, J_length, b_L1);
}

double R_bar(double d, const ProblemParams& params) {
  params.validate();
  if (!(d > 0.0 && d < 1.0)) fail(Errc::validation, "R_bar: d must lie in (0,1)");
  const NodalDecomposition& dec = *params.decomp;
  const double c = std::abs(params.c);
  double worst = 0.0;
  for (int i = 0; i < dec.m; ++i)
    if (dec.has_neg(i)) {
      double L = dec.neg(i).length();
      worst = std::max(worst, L * std::exp(c * L));
    }
  if (dec.leading_neg) {
    double L = dec.neg(-1).length();
    worst = std::max(worst, L * std::exp(c * L));
  }
  double eps = (1.0 - d) / (1.0 + worst);
  WeightQuadratures q = quadratures(*params.weight, dec, 1e-12);
  double K = lipschitz_at_one(*params.g);
  double R = 0.0;
  for (int i = 0; i < dec.m; ++i) {
    double Ri = r_eps_formula(eps, K, c, dec.pos(i).length(), params.lambda * q.pos_L1[i]);
    R = std::max(R, Ri);
  }
  return R;
}

namespace {

struct IntervalData {
  double Lp, Ln;        // |I_i^+|, |I_i^-|
  double normP, normN;  // ||a||_L1 on them
  double Ar, Al;        // ||A_i^r||, ||A_i^l||
  bool neg_ok;          // negativity interval present
};

}  // namespace

MuStarLedger mu_star(double lambda, double r, double rho, double R,
                     const ProblemParams& params, int grid_n) {
  params.validate();
  if (!(0.0 < r)) fail(Errc::precondition_violated, "mu_star: need 0 < r");
  if (!(r < rho)) fail(Errc::precondition_violated, "mu_star: need r < rho");
  if (!(rho < R)) fail(Errc::precondition_violated, "mu_star: need rho < R");
  if (!(R < 1.0)) fail(Errc::precondition_violated, "mu_star: need R < 1");

  const NodalDecomposition& d = *params.decomp;
  const int m = d.m;
  const double c = std::abs(params.c);
  WeightQuadratures q = quadratures(*params.weight, d, 1e-12);

  MuStarLedger L;
  L.lambda = lambda;
  L.r = r;
  L.rho = rho;
  L.R = R;
  L.zeta_r = zeta_stat(*params.g, r, grid_n);
  L.gamma_r = gamma_stat(*params.g, r, grid_n);
  L.Gamma_R = Gamma_stat(*params.g, R, grid_n);
  L.chi_rR = chi_stat(*params.g, r, R, grid_n);
  L.chi_rhoR = chi_stat(*params.g, rho, R, grid_n);

  std::vector<IntervalData> iv(m);
  for (int i = 0; i < m; ++i) {
    iv[i].Lp = d.pos(i).length();
    iv[i].normP = q.pos_L1[i];
    iv[i].neg_ok = d.has_neg(i);
    iv[i].Ln = iv[i].neg_ok ? d.neg(d.cyclic ? d.wrap_index(i) : i).length() : 0.0;
    iv[i].normN = q.neg_L1[i];
    iv[i].Ar = q.A_r_L1[i];
    iv[i].Al = q.A_l_L1[i];
  }
  // Dirichlet/Neumann profile may carry a leading negativity interval I_0^-;
  // it plays the role of I_{i-1}^- for i = 1. Index -1 below refers to it.
  auto neg_data = [&](int i) -> IntervalData {
    if (d.cyclic) {
      int w = d.wrap_index(i);
      return iv[w];
    }
    if (i == -1 && d.leading_neg) {
      IntervalData e{};
      e.neg_ok = true;
      e.Ln = d.neg(-1).length();
      e.normN = q.leading_neg_L1;
      // A-norms over I_0^- (left end of the domain)
      Interval i0 = d.neg(-1);
      e.Ar = 0.0;
      e.Al = 0.0;
      for (const WeightPiece& p : params.weight->pieces) {
        double a = std::max(i0.lo, p.x0), b = std::min(i0.hi, p.x1);
        if (b <= a) continue;
        e.Ar += integrate_adaptive(
            [&](double x) { return std::max(-p.eval(x), 0.0) * (i0.hi - x); }, a, b, 1e-12);
        e.Al += integrate_adaptive(
            [&](double x) { return std::max(-p.eval(x), 0.0) * (x - i0.lo); }, a, b, 1e-12);
      }
      return e;
    }
    if (i >= 0 && i < m && iv[i].neg_ok) return iv[i];
    IntervalData e{};
    e.neg_ok = false;
    return e;
  };
  auto pos_data = [&](int i) -> const IntervalData* {
    if (d.cyclic) return &iv[d.wrap_index(i)];
    if (i >= 0 && i < m) return &iv[i];
    return nullptr;
  };

  L.mu_hat_r.assign(m, 0.0);
  L.mu_hat_l.assign(m, 0.0);
  L.mu_check_r.assign(m, 0.0);
  L.mu_tilde_r.assign(m, 0.0);
  L.mu_tilde_l.assign(m, 0.0);
  L.mu_star_plus.assign(m, 0.0);
  L.mu_star_minus.assign(m, 0.0);
  L.mu_bar.assign(m, 0.0);

  auto skip = [&](const std::string& what, int i) {
    L.skipped.push_back(what + "[" + std::to_string(i + 1) + "]");
  };

  double H1 = 0.0, H3a = 0.0, H3b = 0.0;
  for (int i = 0; i < m; ++i) {
    IntervalData right = neg_data(i);          // I_i^-
    IntervalData left = neg_data(i - 1);       // I_{i-1}^-
    const IntervalData* self = &iv[i];

    if (right.neg_ok && right.Ar > 0.0) {
      L.mu_hat_r[i] = 2.0 * R * std::exp(c * right.Ln) / (r * L.gamma_r * right.Ar);
      L.mu_check_r[i] = lambda * self->normP * L.Gamma_R *
                        std::exp(c * (self->Lp + right.Ln)) * (self->Lp + right.Ln) *
                        std::exp(c * right.Ln) / (right.Ar * L.chi_rhoR);
      L.mu_bar[i] = lambda * self->normP * L.Gamma_R *
                    std::exp(2.0 * c * (self->Lp + right.Ln)) * (self->Lp + right.Ln) /
                    (right.Ar * L.chi_rR);
      H1 = std::max({H1, L.mu_hat_r[i], L.mu_check_r[i]});
      H3a = std::max(H3a, L.mu_hat_r[i]);
      H3b = std::max(H3b, L.mu_bar[i]);
    } else {
      skip("mu_hat_r", i);
      skip("mu_check_r", i);
      skip("mu_bar", i);
    }

    if (left.neg_ok && left.Al > 0.0) {
      L.mu_hat_l[i] = 2.0 * R * std::exp(c * left.Ln) / (r * L.gamma_r * left.Al);
      H1 = std::max(H1, L.mu_hat_l[i]);
      H3a = std::max(H3a, L.mu_hat_l[i]);
    } else {
      skip("mu_hat_l", i);
    }

    const IntervalData* next = pos_data(i + 1);
    if (right.neg_ok && next && right.normN > 0.0) {
      double num = 2.0 * lambda *
                   (self->normP * L.zeta_r * r * std::exp(c * (self->Lp + right.Ln + next->Lp)) +
                    next->normP * L.Gamma_R * std::exp(c * next->Lp));
      double den = L.gamma_r * r * right.normN * std::exp(-c * (right.Ln + next->Lp));
      L.mu_tilde_r[i] = num / den;
      H3a = std::max(H3a, L.mu_tilde_r[i]);
    } else {
      skip("mu_tilde_r", i);
    }

    const IntervalData* prevp = pos_data(i - 1);
    if (left.neg_ok && prevp && left.normN > 0.0) {
      double num = 2.0 * lambda *
                   (self->normP * L.zeta_r * r * std::exp(c * (prevp->Lp + left.Ln + self->Lp)) +
                    prevp->normP * L.Gamma_R * std::exp(c * prevp->Lp));
      double den = L.gamma_r * r * left.normN * std::exp(-c * (left.Ln + prevp->Lp));
      L.mu_tilde_l[i] = num / den;
      H3a = std::max(H3a, L.mu_tilde_l[i]);
    } else {
      skip("mu_tilde_l", i);
    }

    IntervalData nneg = neg_data(i + 1);       // I_{i+1}^-
    const IntervalData* nnext = pos_data(i + 2);
    if (nneg.neg_ok && nnext && nneg.normN > 0.0) {
      L.mu_star_plus[i] = lambda * nnext->normP * L.Gamma_R *
                          std::exp(2.0 * c * (nneg.Ln + nnext->Lp)) / (nneg.normN * L.chi_rR);
      H3a = std::max(H3a, L.mu_star_plus[i]);
    } else {
      skip("mu_star_plus", i);
    }

    IntervalData pneg = neg_data(i - 2);       // I_{i-2}^-
    const IntervalData* pprev = pos_data(i - 2);
    if (pneg.neg_ok && pprev && pneg.normN > 0.0) {
      L.mu_star_minus[i] = lambda * pprev->normP * L.Gamma_R *
                           std::exp(2.0 * c * (pprev->Lp + pneg.Ln)) / (pneg.normN * L.chi_rR);
      H3a = std::max(H3a, L.mu_star_minus[i]);
    } else {
      skip("mu_star_minus", i);
    }
  }

  L.mu_sharp = mu_sharp(d, q, lambda);
  L.mu_H1 = H1;
  L.mu_H3 = std::max({H3a, H3b, L.mu_sharp});
  L.mu_star = std::max(L.mu_H1, L.mu_H3);

  // theorem-hypothesis record
  L.lambda_star_rho = lambda_star(rho, params).lambda_star;
  L.r_bar_val = params.g->has_g0() ? r_bar(params, lambda) : 0.0;
  L.R_bar_rho = R_bar(rho, params);
  L.hyp_lambda = lambda > L.lambda_star_rho;
  L.hyp_r = r <= L.r_bar_val;
  L.hyp_R = R >= L.R_bar_rho;
  return L;
}

std::vector<std::pair<std::string, double>> MuStarLedger::flatten() const {
  std::vector<std::pair<std::string, double>> kv;
  kv.emplace_back("lambda", lambda);
  kv.emplace_back("r", r);
  kv.emplace_back("rho", rho);
  kv.emplace_back("R", R);
  kv.emplace_back("zeta_r", zeta_r);
  kv.emplace_back("gamma_r", gamma_r);
  kv.emplace_back("Gamma_R", Gamma_R);
  kv.emplace_back("chi_rR", chi_rR);
  kv.emplace_back("chi_rhoR", chi_rhoR);
  auto row = [&](const std::string& name, const std::vector<double>& v) {
    for (size_t i = 0; i < v.size(); ++i)
      kv.emplace_back(name + "[" + std::to_string(i + 1) + "]", v[i]);
  };
  row("mu_hat_r", mu_hat_r);
  row("mu_hat_l", mu_hat_l);
  row("mu_check_r", mu_check_r);
  row("mu_tilde_r", mu_tilde_r);
  row("mu_tilde_l", mu_tilde_l);
  row("mu_star_plus", mu_star_plus);
  row("mu_star_minus", mu_star_minus);
  row("mu_bar", mu_bar);
  kv.emplace_back("mu_H1", mu_H1);
  kv.emplace_back("mu_H3", mu_H3);
  kv.emplace_back("mu_sharp", mu_sharp);
  kv.emplace_back("mu_star", mu_star);
  kv.emplace_back("lambda_star_rho", lambda_star_rho);
  kv.emplace_back("r_bar", r_bar_val);
  kv.emplace_back("R_bar_rho", R_bar_rho);
  kv.emplace_back("hyp_lambda_gt_lambda_star", hyp_lambda ? 1.0 : 0.0);
  kv.emplace_back("hyp_r_le_r_bar", hyp_r ? 1.0 : 0.0);
  kv.emplace_back("hyp_R_ge_R_bar", hyp_R ? 1.0 : 0.0);
  return kv;
}

}  // namespace cline
