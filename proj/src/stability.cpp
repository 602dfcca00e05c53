#include "cline/stability.hpp"

#include <algorithm>
#include <cmath>

#include "cline/errors.hpp"

namespace cline {

namespace {

// Linearization potential q(x) = a_{lambda,mu}(x) g'(u(x)), u interpolated
// linearly between the profile nodes.
struct Potential {
  const SolutionProfile& prof;
  const ProblemParams& params;
  double operator()(double x) const {
    return params.a_lm(x) * params.g->deriv(std::clamp(prof.traj.u_at(x), 0.0, 1.0));
  }
};

// One RK4 pass of v'' + c v' + (nu + q) v = 0 over the profile grid,
// propagating (v, v') from the given initial data.
struct LinearFlow {
  const Potential& q;
  double c;
  double nu;

  std::array<double, 2> advance(std::array<double, 2> y, double xa, double xb) const {
    int nsub = 1;  // profile grid is already integration-fine
    double h = (xb - xa) / nsub;
    auto deriv = [&](double x, const std::array<double, 2>& s) -> std::array<double, 2> {
      return {s[1], -c * s[1] - (nu + q(x)) * s[0]};
    };
    for (int i = 0; i < nsub; ++i) {
      double x = xa + i * h;
      auto k1 = deriv(x, y);
      auto k2 = deriv(x + h / 2, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
      auto k3 = deriv(x + h / 2, {y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]});
      auto k4 = deriv(x + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
      y[0] += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
      y[1] += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    }
    return y;
  }

  std::array<double, 2> run(const std::vector<double>& grid, std::array<double, 2> y0,
                            std::vector<double>* store = nullptr) const {
    std::array<double, 2> y = y0;
    if (store) store->push_back(y[0]);
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
      y = advance(y, grid[i], grid[i + 1]);
      if (store) store->push_back(y[0]);
      double scale = std::abs(y[0]) + std::abs(y[1]);
      if (!std::isfinite(scale)) fail(Errc::not_converged, "eigen shot blew up");
    }
    return y;
  }
};

// Shooting value whose zeros are the eigenvalues.
double shot_value(const SolutionProfile& prof, const ProblemParams& params, double nu) {
  Potential q{prof, params};
  LinearFlow flow{q, params.c, nu};
  switch (prof.bc.kind) {
    case BcKind::neumann:
      return flow.run(prof.traj.x, {1.0, 0.0})[1];
    case BcKind::dirichlet:
      return flow.run(prof.traj.x, {0.0, 1.0})[0];
    case BcKind::periodic: {
      auto col1 = flow.run(prof.traj.x, {1.0, 0.0});
      auto col2 = flow.run(prof.traj.x, {0.0, 1.0});
      double trace = col1[0] + col2[1];
      // periodic eigenvalue <=> Floquet multiplier 1 <=> trace = 1 + e^{-cP}
      double target = 1.0 + std::exp(-params.c * (prof.traj.x1() - prof.traj.x0()));
      return trace - target;
    }
  }
  return 0.0;
}

int interior_sign_changes(const std::vector<double>& v) {
  int n = 0;
  for (size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i - 1] != 0.0 && v[i] != 0.0 && (v[i - 1] > 0) != (v[i] > 0)) ++n;
  return n;
}

}  // namespace

std::vector<double> eigenfunction(const SolutionProfile& profile, const ProblemParams& params,
                                  double nu) {
  Potential q{profile, params};
  LinearFlow flow{q, params.c, nu};
  std::vector<double> vals;
  switch (profile.bc.kind) {
    case BcKind::neumann:
      flow.run(profile.traj.x, {1.0, 0.0}, &vals);
      break;
    case BcKind::dirichlet:
      flow.run(profile.traj.x, {0.0, 1.0}, &vals);
      break;
    case BcKind::periodic: {
      // eigenvector of the period map for multiplier 1
      std::vector<double> tmp;
      auto col1 = flow.run(profile.traj.x, {1.0, 0.0});
      auto col2 = flow.run(profile.traj.x, {0.0, 1.0});
      double a = col1[0] - 1.0, b = col2[0];
      std::array<double, 2> y0;
      if (std::abs(a) > std::abs(b))
        y0 = {-b, a};  // (M - I) y0 = 0 up to scaling
      else
        y0 = {1.0, std::abs(b) > 1e-300 ? -a / b : 0.0};
      double norm = std::max(std::abs(y0[0]), std::abs(y0[1]));
      if (norm == 0.0) y0 = {1.0, 0.0};
      flow.run(profile.traj.x, {y0[0] / norm, y0[1] / norm}, &vals);
      break;
    }
  }
  return vals;
}

StabilityResult principal_eigenvalue(const SolutionProfile& profile,
                                     const ProblemParams& params,
                                     const StabilityOptions& opts) {
  params.validate();
  Potential q{profile, params};
  // the first eigenvalue sits above -max q
  double qmax = 0.0;
  for (double x : profile.traj.x) qmax = std::max(qmax, q(x));
  double nu_lo = std::max(-opts.nu_max, -qmax - 1.0);

  double step = opts.march_step;
  for (int attempt = 0; attempt < 6; ++attempt) {
    double prev_nu = nu_lo;
    double prev_val = shot_value(profile, params, prev_nu);
    double nu0 = NAN;
    if (prev_val == 0.0) nu0 = prev_nu;
    for (double nu = nu_lo + step; std::isnan(nu0) && nu <= opts.nu_max; nu += step) {
      double val = shot_value(profile, params, nu);
      if (val == 0.0) {
        nu0 = nu;
        break;
      }
      if (prev_val * val < 0.0) {
        double lo = prev_nu, hi = nu, flo = prev_val;
        while (hi - lo > opts.bisect_tol) {
          double mid = 0.5 * (lo + hi);
          double fm = shot_value(profile, params, mid);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if (flo * fm < 0.0)
            hi = mid;
          else {
            lo = mid;
            flo = fm;
          }
        }
        nu0 = 0.5 * (lo + hi);
        break;
      }
      prev_nu = nu;
      prev_val = val;
    }
    if (std::isnan(nu0)) break;  // no bracket in the window: report below
    // principal eigenfunction must be node-free; otherwise the march step
    // skipped an even number of eigenvalues -- rescan finer
    std::vector<double> ef = eigenfunction(profile, params, nu0);
    if (interior_sign_changes(ef) == 0) {
      StabilityResult res;
      res.nu0 = nu0;
      res.label = nu0 >= 0.0 ? "stable" : "unstable";
      res.method = profile.bc.kind == BcKind::periodic ? StabilityMethod::hill_discriminant
                                                       : StabilityMethod::sturm_shoot;
      if (params.c != 0.0) res.convention = "extended (c != 0)";
      return res;
    }
    step *= 0.5;
  }
  fail(Errc::not_converged, "principal eigenvalue: no admissible bracket within the window");
}

namespace {

// Sturm count for the symmetric pencil (A - nu W) with A tridiagonal
// (diag d, off-diagonal e) and W diagonal positive: number of eigenvalues
// below nu.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e,
                const std::vector<double>& w, double nu) {
  int count = 0;
  double t = d[0] - nu * w[0];
  if (t < 0) ++count;
  for (size_t i = 1; i < d.size(); ++i) {
    double denom = t;
    if (denom == 0.0) denom = 1e-300;
    t = (d[i] - nu * w[i]) - e[i - 1] * e[i - 1] / denom;
    if (t < 0) ++count;
  }
  return count;
}

double tridiag_bisect_smallest(const std::vector<double>& d, const std::vector<double>& e,
                               const std::vector<double>& w) {
  // Gershgorin bounds for the pencil
  double lo = 1e300, hi = -1e300;
  size_t n = d.size();
  for (size_t i = 0; i < n; ++i) {
    double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, (d[i] - r) / w[i]);
    hi = std::max(hi, (d[i] + r) / w[i]);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    (sturm_count(d, e, w, mid) >= 1 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double principal_eigenvalue_fd(const SolutionProfile& profile, const ProblemParams& params,
                               int n) {
  if (std::abs(params.c) > 1e-14)
    fail(Errc::validation, "finite-difference oracle is defined for c = 0");
  Potential q{profile, params};
  const double x0 = profile.traj.x0(), x1 = profile.traj.x1();
  const double h = (x1 - x0) / n;
  const double ih2 = 1.0 / (h * h);

  switch (profile.bc.kind) {
    case BcKind::dirichlet: {
      // interior nodes 1..n-1 of -v'' - q v = nu v
      std::vector<double> d(n - 1), e(n - 2), w(n - 1, 1.0);
      for (int i = 1; i < n; ++i) d[i - 1] = 2.0 * ih2 - q(x0 + i * h);
      for (int i = 0; i < n - 2; ++i) e[i] = -ih2;
      return tridiag_bisect_smallest(d, e, w);
    }
    case BcKind::neumann: {
      // nodes 0..n with mirrored ghosts; end rows scaled by 1/2 to make the
      // pencil symmetric (weights w capture the scaling)
      std::vector<double> d(n + 1), e(n), w(n + 1, 1.0);
      for (int i = 0; i <= n; ++i) d[i] = 2.0 * ih2 - q(x0 + i * h);
      for (int i = 0; i < n; ++i) e[i] = -ih2;
      d[0] = 0.5 * (2.0 * ih2 - q(x0));
      d[n] = 0.5 * (2.0 * ih2 - q(x1));
      w[0] = 0.5;
      w[n] = 0.5;
      return tridiag_bisect_smallest(d, e, w);
    }
    case BcKind::periodic: {
      // nodes 0..n-1 with wraparound corners; inverse iteration under a
      // Gershgorin shift, corner handled by Sherman-Morrison
      int N = n;
      std::vector<double> diag(N), qv(N);
      for (int i = 0; i < N; ++i) {
        qv[i] = q(x0 + i * h);
        diag[i] = 2.0 * ih2 - qv[i];
      }
      double off = -ih2;
      double gersh = 1e300;
      for (int i = 0; i < N; ++i) gersh = std::min(gersh, diag[i] - 2.0 * ih2);
      double shift = gersh - 1.0;
      // A - shift I = T + u e0 eN^T + u eN e0^T with T tridiagonal; use
      // Sherman-Morrison twice via the rank-2 form U V^T.
      std::vector<double> td(N);
      for (int i = 0; i < N; ++i) td[i] = diag[i] - shift;
      auto solve_tridiag = [&](std::vector<double> b) {
        std::vector<double> c(N), x(N);
        double beta = td[0];
        x[0] = b[0] / beta;
        for (int i = 1; i < N; ++i) {
          c[i] = off / beta;
          beta = td[i] - off * c[i];
          x[i] = (b[i] - off * x[i - 1]) / beta;
        }
        for (int i = N - 2; i >= 0; --i) x[i] -= c[i + 1] * x[i + 1];
        return x;
      };
      // columns of the rank-2 correction
      std::vector<double> u1(N, 0.0), u2(N, 0.0);
      u1[0] = off;
      u2[N - 1] = off;
      std::vector<double> z1 = solve_tridiag(u1), z2 = solve_tridiag(u2);
      auto solve_full = [&](const std::vector<double>& b) {
        std::vector<double> y = solve_tridiag(b);
        // (T + u1 eN^T + u2 e0^T)^{-1} via 2x2 capacitance
        double c11 = 1.0 + z1[N - 1], c12 = z2[N - 1];
        double c21 = z1[0], c22 = 1.0 + z2[0];
        double det = c11 * c22 - c12 * c21;
        double r1 = y[N - 1], r2 = y[0];
        double a1 = (c22 * r1 - c12 * r2) / det;
        double a2 = (-c21 * r1 + c11 * r2) / det;
        for (int i = 0; i < N; ++i) y[i] -= a1 * z1[i] + a2 * z2[i];
        return y;
      };
      std::vector<double> v(N, 1.0);
      double lam = 0.0;
      for (int it = 0; it < 300; ++it) {
        std::vector<double> w2 = solve_full(v);
        double norm = 0.0;
        for (double t : w2) norm += t * t;
        norm = std::sqrt(norm);
        for (double& t : w2) t /= norm;
        // Rayleigh quotient of the shifted operator
        double num = 0.0;
        for (int i = 0; i < N; ++i) {
          double Av = td[i] * w2[i] + off * w2[(i + 1) % N] + off * w2[(i + N - 1) % N];
          num += w2[i] * Av;
        }
        double lam_new = num + shift;
        if (std::abs(lam_new - lam) < 1e-12 * (1.0 + std::abs(lam_new)) && it > 4) {
          lam = lam_new;
          break;
        }
        lam = lam_new;
        v = w2;
      }
      return lam;
    }
  }
  fail(Errc::validation, "unknown boundary condition");
}

}  // namespace cline
