#pragma once

// Flat dotted-key config files, human-diffable experiment records:
//   weight.pieces[0].expr = 2*sin(2*x)-max(0,sin(x))
//   problem.lambda = 12
// '#' starts a comment; keys are unique; values are scalars, strings, or
// comma-separated lists.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cline/census.hpp"
#include "cline/nonlinearity.hpp"
#include "cline/solver.hpp"
#include "cline/weight.hpp"

namespace cline {

class KeyValues {
 public:
  static KeyValues parse_file(const std::string& path);
  static KeyValues parse_text(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double dflt) const;
  int get_int_or(const std::string& key, int dflt) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;
  const std::string& text() const { return text_; }

 private:
  std::map<std::string, std::string> kv_;
  std::string text_;
};

struct RunConfig {
  std::string run_id = "run";
  std::string out_dir = "out";
  int workers = 1;

  WeightSpec weight;
  Nonlinearity g;

  double c = 0.0;
  double lambda = 1.0;
  double mu = 1.0;
  BcKind bc = BcKind::periodic;
  int k = 1;

  double rho = 0.5;
  std::optional<double> r_override, R_override;
  double band_margin = 1e-6;

  double sign_tol = 1e-10;
  double quad_tol = 1e-10;
  double newton_tol = 1e-10;
  double interior_tol = 1e-8;
  double h = 0.0;  // 0: span/4000

  int seed_budget = 24;
  int scan_points = 1200;

  // subcommand-specific
  int subharmonic_k = 2;
  std::vector<int> chaos_window;
  int chaos_n = 1;
  std::vector<double> sweep_mu;         // mu list at fixed lambda
  std::vector<double> sweep_lambda_mu;  // lambda = mu list
  double sweep_shrink = 0.05;
  std::string solve_seed;               // "0.4" or "0.4,0.1"
  std::string stability_profile;        // profile file for the stability subcommand
  double stability_eps_convex = 0.0;    // upper end of the g'' > 0 interval, user input

  std::string config_text;  // verbatim, for hashing into the manifest

  static RunConfig load(const std::string& path);
  static RunConfig from_keyvalues(const KeyValues& kv);
};

// Derived per-run state: decomposition, quadratures, bands, problem wiring.
// params points into the context's own weight/g/decomp, so the context is
// pinned to the heap and never copied.
struct RunContext {
  RunConfig cfg;
  NodalDecomposition decomp;
  WeightQuadratures quad;
  ProblemParams params;
  Bands bands;  // rho from the config; r/R per the auto policy unless overridden

  static std::unique_ptr<RunContext> make(RunConfig cfg);
  RunContext(const RunContext&) = delete;
  RunContext& operator=(const RunContext&) = delete;
  CensusOptions census_options() const;
  BoundaryCondition boundary() const;

 private:
  RunContext() = default;
};

}  // namespace cline
