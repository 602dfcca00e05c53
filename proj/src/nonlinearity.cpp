#include "cline/nonlinearity.hpp"

#include <cmath>
#include <memory>

#include "cline/errors.hpp"
#include "cline/numerics.hpp"

namespace cline {

namespace {

constexpr double kPolishTol = 1e-12;   // golden-section abscissa tolerance
constexpr double kRoundTol = 1e-9;     // conservative rounding applied to extrema

double round_up(double v) { return v + kRoundTol * (1.0 + std::abs(v)); }
double round_down(double v) {
  double w = v - kRoundTol * (1.0 + std::abs(v));
  return (v >= 0.0 && w < 0.0) ? 0.0 : w;
}

}  // namespace

Nonlinearity Nonlinearity::make_builtin(BuiltinG which) {
  Nonlinearity g;
  switch (which) {
    case BuiltinG::logistic_dominant:
      g.eval_ = [](double u) { return u * u * (1.0 - u); };
      g.deriv_ = [](double u) { return 2.0 * u - 3.0 * u * u; };
      g.id_ = "logistic_dominant";
      break;
    case BuiltinG::logistic_haploid:
      g.eval_ = [](double u) { return u * (1.0 - u); };
      g.deriv_ = [](double u) { return 1.0 - 2.0 * u; };
      g.id_ = "logistic_haploid";
      break;
  }
  g.smooth_c1_ = true;
  g.check_conditions();
  return g;
}

Nonlinearity Nonlinearity::from_expr(const std::string& g_expr, const std::string& deriv_expr) {
  Nonlinearity g;
  auto e = std::make_shared<Expr>(Expr::parse(g_expr, "u"));
  g.eval_ = [e](double u) { return (*e)(u); };
  g.id_ = "expr:" + g_expr;
  if (!deriv_expr.empty()) {
    auto de = std::make_shared<Expr>(Expr::parse(deriv_expr, "u"));
    g.deriv_ = [de](double u) { return (*de)(u); };
    g.smooth_c1_ = true;
  } else if (auto sym = e->derivative()) {
    auto de = std::make_shared<Expr>(std::move(*sym));
    g.deriv_ = [de](double u) { return (*de)(u); };
    g.smooth_c1_ = true;
  } else {
    // central differences, one-sided at the ends of [0,1]
    auto f = g.eval_;
    g.deriv_ = [f](double u) {
      const double h = 1e-6;
      double lo = std::max(0.0, u - h), hi = std::min(1.0, u + h);
      return (f(hi) - f(lo)) / (hi - lo);
    };
    g.smooth_c1_ = false;
  }
  g.check_conditions();
  return g;
}

void Nonlinearity::check_conditions() {
  if (std::abs(eval_(0.0)) > 1e-12 || std::abs(eval_(1.0)) > 1e-12)
    fail(Errc::validation, "nonlinearity must vanish at u = 0 and u = 1");
  for (int i = 1; i < 256; ++i) {
    double u = i / 256.0;
    if (!(eval_(u) > 0.0))
      fail(Errc::validation, "nonlinearity must be positive on (0,1), fails at u = " +
                                 std::to_string(u));
  }
  // (g0): g(u)/u decreasing toward zero along a small-u ladder
  double r4 = eval_(1e-4) / 1e-4, r6 = eval_(1e-6) / 1e-6, r8 = eval_(1e-8) / 1e-8;
  has_g0_ = r4 > r6 && r6 > r8 && r8 < 1e-6;
  // (g1): g(u)/(1-u) bounded along a ladder toward u = 1
  double q4 = eval_(1.0 - 1e-4) / 1e-4, q6 = eval_(1.0 - 1e-6) / 1e-6,
         q8 = eval_(1.0 - 1e-8) / 1e-8;
  has_g1_ = q8 < 2.0 * q4 + 1.0 && std::isfinite(q8) && std::isfinite(q6);
}

double Nonlinearity::eval(double u) const { return eval_(u); }
double Nonlinearity::deriv(double u) const { return deriv_(u); }

double zeta_stat(const Nonlinearity& g, double d, int grid_n) {
  if (!(d > 0.0) || d >= 1.0) fail(Errc::domain_error, "zeta: need 0 < d < 1");
  return round_up(grid_max([&](double u) { return g(u) / u; }, d / 2, d, grid_n, kPolishTol));
}

double gamma_stat(const Nonlinearity& g, double d, int grid_n) {
  if (!(d > 0.0) || d >= 1.0) fail(Errc::domain_error, "gamma: need 0 < d < 1");
  return round_down(grid_min([&](double u) { return g(u) / u; }, d / 2, d, grid_n, kPolishTol));
}

double Gamma_stat(const Nonlinearity& g, double d, int grid_n) {
  if (!(d > 0.0) || d >= 1.0) fail(Errc::domain_error, "Gamma: need 0 < d < 1");
  return round_up(grid_max([&](double u) { return g(u); }, 0.0, d, grid_n, kPolishTol));
}

double chi_stat(const Nonlinearity& g, double d, double D, int grid_n) {
  if (!(d > 0.0) || D >= 1.0 || d > D) fail(Errc::domain_error, "chi: need 0 < d <= D < 1");
  if (d == D) return round_down(g(d));
  return round_down(grid_min([&](double u) { return g(u); }, d, D, grid_n, kPolishTol));
}

RangeStats range_stats(const Nonlinearity& g, double d, double D, int grid_n) {
  if (!(0.0 < d) || !(d <= D) || !(D < 1.0))
    fail(Errc::domain_error, "range_stats: need 0 < d <= D < 1");
  return {zeta_stat(g, d, grid_n), gamma_stat(g, d, grid_n), Gamma_stat(g, D, grid_n),
          chi_stat(g, d, D, grid_n)};
}

double lipschitz_at_one(const Nonlinearity& g) {
  if (!g.has_g1()) fail(Errc::g1_violation, "lipschitz_at_one requires (g1)");
  auto ratio = [&](double u) { return g(u) / (1.0 - u); };
  double sup = grid_max(ratio, 1e-12, 1.0 - 1e-4, 8192, kPolishTol);
  // refinement ladder toward u = 1
  double prev = ratio(1.0 - 1e-4);
  for (double eps = 1e-5; eps >= 1e-11; eps /= 10.0) {
    double v = ratio(1.0 - eps);
    if (!std::isfinite(v) || v > 10.0 * (prev + 1.0))
      fail(Errc::g1_violation, "g(u)/(1-u) diverges as u -> 1-");
    sup = std::max(sup, v);
    prev = v;
  }
  return sup * 1.01;
}

}  // namespace cline
