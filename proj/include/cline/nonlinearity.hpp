#pragma once

// The nonlinear term g on [0,1]: builtins g(u) = u^2(1-u) and u(1-u), or a
// user expression, together with the range statistics feeding the threshold
// formulas (all of them rounded in the direction that keeps a certificate
// valid: maxima up, minima down).

#include <functional>
#include <optional>
#include <string>

#include "cline/expr.hpp"

namespace cline {

enum class BuiltinG { logistic_dominant, logistic_haploid };

class Nonlinearity {
 public:
  // logistic_dominant: u^2(1-u); logistic_haploid: u(1-u).
  static Nonlinearity make_builtin(BuiltinG which);
  // Custom g from an expression in u; derivative symbolic when polynomial,
  // otherwise by central differences (or an explicit deriv expression).
  static Nonlinearity from_expr(const std::string& g_expr,
                                const std::string& deriv_expr = "");

  double operator()(double u) const { return eval(u); }
  double eval(double u) const;
  double deriv(double u) const;

  bool has_g0() const { return has_g0_; }        // g(u)/u -> 0 as u -> 0+
  bool has_g1() const { return has_g1_; }        // limsup g(u)/(1-u) finite
  bool smooth_c1() const { return smooth_c1_; }
  const std::string& id() const { return id_; }

  Nonlinearity() = default;  // empty; assigned from a factory before use

 private:
  void check_conditions();

  std::function<double(double)> eval_;
  std::function<double(double)> deriv_;
  bool has_g0_ = false, has_g1_ = false, smooth_c1_ = false;
  std::string id_;
};

// zeta(d) = max_{d/2<=u<=d} g(u)/u, rounded up; gamma(d) = min, rounded down.
double zeta_stat(const Nonlinearity& g, double d, int grid_n = 4096);
double gamma_stat(const Nonlinearity& g, double d, int grid_n = 4096);
// Gamma(d) = max_{0<=u<=d} g(u), rounded up.
double Gamma_stat(const Nonlinearity& g, double d, int grid_n = 4096);
// chi(d,D) = min_{d<=u<=D} g(u), rounded down.
double chi_stat(const Nonlinearity& g, double d, double D, int grid_n = 4096);

struct RangeStats {
  double zeta, gamma, Gamma, chi;
};

// All four statistics for the pair (d, D); throws DomainError unless
// 0 < d <= D < 1.
RangeStats range_stats(const Nonlinearity& g, double d, double D, int grid_n = 4096);

// Smallest K (up to a 1% safety round-up) with g(u) <= K(1-u) on [0,1].
// Throws G1Violation when the ratio diverges as u -> 1-.
double lipschitz_at_one(const Nonlinearity& g);

}  // namespace cline
