#include "cline/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "cline/errors.hpp"

namespace cline {

void ProblemParams::validate() const {
  if (!(lambda > 0.0)) fail(Errc::validation, "lambda must be positive");
  if (!(mu > 0.0)) fail(Errc::validation, "mu must be positive");
  if (!weight || !decomp || !g) fail(Errc::validation, "problem wiring incomplete");
}

double ProblemParams::a_lm(double x) const {
  double a = weight->eval_periodic(x);
  return a >= 0.0 ? lambda * a : mu * a;  // lambda a^+ - mu a^-
}

namespace {

double forcing(double x, double u, const ProblemParams& p) {
  if (p.truncated) {
    if (u <= 0.0) return -u;
    if (u >= 1.0) return 0.0;
    return p.a_lm(x) * p.g->eval(u);
  }
  if (u < -1e-9 || u > 1.0 + 1e-9)
    fail(Errc::domain_error, "raw right-hand side needs u in [0,1], got u = " + std::to_string(u));
  return p.a_lm(x) * p.g->eval(std::clamp(u, 0.0, 1.0));
}

}  // namespace

std::array<double, 2> rhs(double x, double u, double uprime, const ProblemParams& params) {
  return {uprime, -params.c * uprime - forcing(x, u, params)};
}

double forcing_du(double x, double u, const ProblemParams& p) {
  if (p.truncated) {
    if (u < 0.0) return -1.0;
    if (u > 1.0) return 0.0;
    // seams u = 0, u = 1: one-sided interior derivative
    return p.a_lm(x) * p.g->deriv(std::clamp(u, 0.0, 1.0));
  }
  return p.a_lm(x) * p.g->deriv(std::clamp(u, 0.0, 1.0));
}

namespace {

// Integration cell: a breakpoint-free span with a pinned weight evaluation,
// so that a jump at the right edge never leaks into the current step.
struct Cell {
  double xa, xb;
  double shift;                 // x - shift lies in [0, P]
  const WeightPiece* piece;     // pinned piece for evaluation
};

std::vector<double> breakpoints_in(const ProblemParams& p, double x0, double x1) {
  std::vector<double> cuts{x0, x1};
  const double P = p.weight->period;
  std::vector<double> base;
  for (const WeightPiece& piece : p.weight->pieces) base.push_back(piece.x1);
  const NodalDecomposition& d = *p.decomp;
  for (int i = 0; i < d.m; ++i) {
    base.push_back(d.sigma[i]);
    base.push_back(d.tau[i]);
  }
  base.push_back(d.sigma[d.m]);
  long l0 = static_cast<long>(std::floor(x0 / P)) - 1;
  long l1 = static_cast<long>(std::floor(x1 / P)) + 1;
  for (long l = l0; l <= l1; ++l)
    for (double b : base) {
      double xb = b + l * P;
      if (xb > x0 + 1e-13 && xb < x1 - 1e-13) cuts.push_back(xb);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return b - a < 1e-12; }),
             cuts.end());
  return cuts;
}

std::vector<Cell> build_cells(const ProblemParams& p, double x0, double x1) {
  std::vector<double> cuts = breakpoints_in(p, x0, x1);
  const double P = p.weight->period;
  std::vector<Cell> cells;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    Cell c;
    c.xa = cuts[i];
    c.xb = cuts[i + 1];
    double mid = 0.5 * (c.xa + c.xb);
    double shift = P * std::floor(mid / P);
    double wrapped = mid - shift;
    c.shift = shift;
    c.piece = nullptr;
    for (const WeightPiece& piece : p.weight->pieces) {
      if (wrapped <= piece.x1 || &piece == &p.weight->pieces.back()) {
        c.piece = &piece;
        break;
      }
    }
    cells.push_back(c);
  }
  return cells;
}

struct State {
  double u = 0.0, v = 0.0;
  double phi[4] = {0, 0, 0, 0};  // row-major variational block
};

}  // namespace

Trajectory integrate(const ProblemParams& params, double x0, double x1, double u0, double v0,
                     const IntegrateOptions& opts) {
  params.validate();
  if (!(x0 < x1)) fail(Errc::validation, "integrate: need x0 < x1");
  double h = opts.h > 0.0 ? opts.h : (x1 - x0) / 4000.0;
  if (h < 1e-14) fail(Errc::step_underflow, "integrate: step below 1e-14");

  std::vector<Cell> cells = build_cells(params, x0, x1);
  const bool with_var = opts.with_variational;
  const double c = params.c;
  const bool raw = !params.truncated;

  Trajectory traj;
  traj.has_var = with_var;
  size_t total = 0;
  for (const Cell& cell : cells) total += static_cast<size_t>(std::ceil((cell.xb - cell.xa) / h));
  traj.x.reserve(total + 1);
  traj.u.reserve(total + 1);
  traj.v.reserve(total + 1);

  State s{u0, v0, {1, 0, 0, 1}};
  traj.x.push_back(x0);
  traj.u.push_back(u0);
  traj.v.push_back(v0);

  const Nonlinearity& g = *params.g;
  const double lam = params.lambda, mu = params.mu;

  for (const Cell& cell : cells) {
    double len = cell.xb - cell.xa;
    long n = std::max(1L, static_cast<long>(std::ceil(len / h)));
    double hh = len / n;
    if (hh < 1e-14) fail(Errc::step_underflow, "integrate: breakpoint alignment forces h < 1e-14");
    auto aeval = [&](double x) {
      double a = cell.piece->eval(x - cell.shift);
      return a >= 0.0 ? lam * a : mu * a;
    };
    auto fterm = [&](double x, double u) -> double {
      if (params.truncated) {
        if (u <= 0.0) return -u;
        if (u >= 1.0) return 0.0;
        return aeval(x) * g.eval(u);
      }
      if (u < -1e-9 || u > 1.0 + 1e-9)
        fail(Errc::domain_error, "raw mode: u left [0,1] during integration");
      return aeval(x) * g.eval(std::clamp(u, 0.0, 1.0));
    };
    auto fprime = [&](double x, double u) -> double {
      if (params.truncated) {
        if (u < 0.0) return -1.0;
        if (u > 1.0) return 0.0;
        return aeval(x) * g.deriv(std::clamp(u, 0.0, 1.0));
      }
      return aeval(x) * g.deriv(std::clamp(u, 0.0, 1.0));
    };
    auto deriv = [&](double x, const State& y, State& dy) {
      dy.u = y.v;
      dy.v = -c * y.v - fterm(x, y.u);
      if (with_var) {
        double fu = fprime(x, y.u);
        dy.phi[0] = y.phi[2];
        dy.phi[1] = y.phi[3];
        dy.phi[2] = -fu * y.phi[0] - c * y.phi[2];
        dy.phi[3] = -fu * y.phi[1] - c * y.phi[3];
      }
    };
    auto axpy = [&](const State& y, double a, const State& d, State& out) {
      out.u = y.u + a * d.u;
      out.v = y.v + a * d.v;
      if (with_var)
        for (int i = 0; i < 4; ++i) out.phi[i] = y.phi[i] + a * d.phi[i];
    };

    for (long k = 0; k < n; ++k) {
      double x = cell.xa + k * hh;
      State k1, k2, k3, k4, tmp;
      deriv(x, s, k1);
      axpy(s, 0.5 * hh, k1, tmp);
      deriv(x + 0.5 * hh, tmp, k2);
      axpy(s, 0.5 * hh, k2, tmp);
      deriv(x + 0.5 * hh, tmp, k3);
      axpy(s, hh, k3, tmp);
      deriv(x + hh, tmp, k4);
      s.u += hh / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u);
      s.v += hh / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
      if (with_var)
        for (int i = 0; i < 4; ++i)
          s.phi[i] += hh / 6.0 * (k1.phi[i] + 2 * k2.phi[i] + 2 * k3.phi[i] + k4.phi[i]);
      if (!std::isfinite(s.u) || !std::isfinite(s.v) ||
          (raw && (std::abs(s.u) > opts.overflow_bound || std::abs(s.v) > opts.overflow_bound)))
        fail(Errc::blow_up, "integrate: state exceeded the overflow bound");
      traj.x.push_back(k + 1 == n ? cell.xb : x + hh);
      traj.u.push_back(s.u);
      traj.v.push_back(s.v);
      ++traj.stats.n_steps;
    }
  }
  // row-major (phi[0] phi[1]; phi[2] phi[3]) = d(u,v)/d(u0,v0)
  traj.var = {s.phi[0], s.phi[1], s.phi[2], s.phi[3]};
  traj.stats.h = h;
  return traj;
}

Trajectory integrate_refined(const ProblemParams& params, double x0, double x1, double u0,
                             double v0, bool with_variational, double h0, double agree_tol,
                             int max_halvings) {
  double h = h0 > 0.0 ? h0 : (x1 - x0) / 4000.0;
  IntegrateOptions opts;
  opts.with_variational = with_variational;
  opts.h = h;
  Trajectory prev = integrate(params, x0, x1, u0, v0, opts);
  for (int i = 0; i < max_halvings; ++i) {
    opts.h = prev.stats.h / 2.0;
    Trajectory next = integrate(params, x0, x1, u0, v0, opts);
    double delta = std::max(std::abs(next.u_end() - prev.u_end()),
                            std::abs(next.v_end() - prev.v_end()));
    next.stats.endpoint_delta = delta;
    if (delta < agree_tol * (1.0 + std::abs(next.u_end()) + std::abs(next.v_end()))) return next;
    prev = std::move(next);
  }
  return prev;
}

double Trajectory::u_at(double xq) const {
  auto it = std::lower_bound(x.begin(), x.end(), xq);
  if (it == x.begin()) return u.front();
  if (it == x.end()) return u.back();
  size_t i = it - x.begin();
  double t = (xq - x[i - 1]) / (x[i] - x[i - 1]);
  return u[i - 1] + t * (u[i] - u[i - 1]);
}

double Trajectory::v_at(double xq) const {
  auto it = std::lower_bound(x.begin(), x.end(), xq);
  if (it == x.begin()) return v.front();
  if (it == x.end()) return v.back();
  size_t i = it - x.begin();
  double t = (xq - x[i - 1]) / (x[i] - x[i - 1]);
  return v[i - 1] + t * (v[i] - v[i - 1]);
}

double Trajectory::min_u() const { return *std::min_element(u.begin(), u.end()); }
double Trajectory::max_u() const { return *std::max_element(u.begin(), u.end()); }

IntervalMax max_on_interval(const Trajectory& traj, const Interval& iv) {
  const double tol = 1e-9 * (1.0 + std::abs(iv.hi));
  if (iv.lo < traj.x.front() - tol || iv.hi > traj.x.back() + tol)
    fail(Errc::coverage_error, "max_on_interval: trajectory does not cover the interval");
  auto lo = std::lower_bound(traj.x.begin(), traj.x.end(), iv.lo - tol);
  auto hi = std::upper_bound(traj.x.begin(), traj.x.end(), iv.hi + tol);
  if (lo == hi) fail(Errc::coverage_error, "max_on_interval: no nodes inside the interval");
  size_t i0 = lo - traj.x.begin();
  size_t i1 = hi - traj.x.begin();  // one past
  size_t best = i0;
  for (size_t i = i0; i < i1; ++i)
    if (traj.u[i] > traj.u[best]) best = i;
  double xs = traj.x[best], um = traj.u[best];
  if (best > i0 && best + 1 < i1) {
    // parabola through the three nodes around the discrete argmax
    double xm = traj.x[best], x1 = traj.x[best - 1], x2 = traj.x[best + 1];
    double fm = traj.u[best], f1 = traj.u[best - 1], f2 = traj.u[best + 1];
    double d1 = (fm - f1) / (xm - x1), d2 = (f2 - fm) / (x2 - xm);
    double curv = (d2 - d1) / (x2 - x1);
    if (curv < 0.0) {
      double xv = 0.5 * (x1 + xm) - 0.5 * d1 / curv;  // vertex of the Newton-form parabola
      if (xv >= iv.lo && xv <= iv.hi) {
        double fv = f1 + d1 * (xv - x1) + curv * (xv - x1) * (xv - xm);
        if (fv > um) {
          um = fv;
          xs = xv;
        }
      }
    }
  }
  return {xs, um};
}

}  // namespace cline
