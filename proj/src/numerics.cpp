#include "cline/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "cline/errors.hpp"

namespace cline {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1].
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
  double kronrod;
  double err;
};

PanelResult gk15(const ScalarFn& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double m = 0.5 * (a + b);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(m - h * kXgk[i]);
    fv[14 - i] = f(m + h * kXgk[i]);
  }
  fv[7] = f(m);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
  resk += kWgk[7] * fv[7];
  // Gauss nodes sit at the odd Kronrod indices.
  for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  resg += kWg[3] * fv[7];
  return {resk * h, std::abs((resk - resg) * h)};
}

double integrate_rec(const ScalarFn& f, double a, double b, double tol, int depth) {
  PanelResult r = gk15(f, a, b);
  if (r.err <= tol || b - a < 1e-14 * (1.0 + std::abs(a))) return r.kronrod;
  if (depth <= 0)
    fail(Errc::quadrature_failure, "adaptive quadrature did not converge");
  double m = 0.5 * (a + b);
  return integrate_rec(f, a, m, 0.5 * tol, depth - 1) +
         integrate_rec(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const ScalarFn& f, double a, double b, double rel_tol,
                          double abs_floor) {
  if (a == b) return 0.0;
  PanelResult whole = gk15(f, a, b);
  double scale = std::max(std::abs(whole.kronrod), abs_floor);
  double tol = std::max(rel_tol * scale, abs_floor);
  if (whole.err <= tol) return whole.kronrod;
  return integrate_rec(f, a, b, tol, 48);
}

double bisect(const ScalarFn& f, double a, double b, double xtol, int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) fail(Errc::domain_error, "bisect: interval does not bracket a root");
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

namespace {

constexpr double kInvPhi = 0.6180339887498949;

double golden(const ScalarFn& f, double lo, double hi, double xtol, int sign) {
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = sign * f(c), fd = sign * f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = sign * f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = sign * f(d);
    }
  }
  double xm = 0.5 * (a + b);
  return sign * std::max({sign * f(xm), fc, fd});
}

}  // namespace

double golden_max(const ScalarFn& f, double lo, double hi, double xtol) {
  return golden(f, lo, hi, xtol, +1);
}

double golden_min(const ScalarFn& f, double lo, double hi, double xtol) {
  return -golden([&](double x) { return -f(x); }, lo, hi, xtol, +1);
}

double grid_max(const ScalarFn& f, double lo, double hi, int n, double xtol) {
  if (n < 2) n = 2;
  int best = 0;
  double fbest = f(lo);
  for (int i = 1; i < n; ++i) {
    double x = lo + (hi - lo) * i / (n - 1);
    double v = f(x);
    if (v > fbest) {
      fbest = v;
      best = i;
    }
  }
  double cell = (hi - lo) / (n - 1);
  double a = std::max(lo, lo + (best - 1) * cell);
  double b = std::min(hi, lo + (best + 1) * cell);
  return std::max(fbest, golden_max(f, a, b, xtol));
}

double grid_min(const ScalarFn& f, double lo, double hi, int n, double xtol) {
  return -grid_max([&](double x) { return -f(x); }, lo, hi, n, xtol);
}

}  // namespace cline
