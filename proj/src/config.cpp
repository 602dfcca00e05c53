#include "cline/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cline/errors.hpp"
#include "cline/thresholds.hpp"

namespace cline {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValues KeyValues::parse_text(const std::string& text) {
  KeyValues kv;
  kv.text_ = text;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(Errc::validation, "config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(Errc::validation, "config line " + std::to_string(lineno) + ": empty key");
    if (kv.kv_.count(key))
      fail(Errc::validation, "config: duplicate key '" + key + "'");
    kv.kv_[key] = value;
  }
  return kv;
}

KeyValues KeyValues::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

bool KeyValues::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string KeyValues::get_string(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) fail(Errc::validation, "config: missing key '" + key + "'");
  return it->second;
}

std::string KeyValues::get_string_or(const std::string& key, const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

double KeyValues::get_double(const std::string& key) const {
  std::string s = get_string(key);
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(Errc::validation, "config: key '" + key + "' is not a number: '" + s + "'");
  }
}

double KeyValues::get_double_or(const std::string& key, double dflt) const {
  return has(key) ? get_double(key) : dflt;
}

int KeyValues::get_int_or(const std::string& key, int dflt) const {
  if (!has(key)) return dflt;
  double v = get_double(key);
  if (v != std::floor(v)) fail(Errc::validation, "config: key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

std::vector<double> KeyValues::get_list(const std::string& key) const {
  std::vector<double> out;
  std::istringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      fail(Errc::validation, "config: list '" + key + "' has a non-numeric entry '" + item + "'");
    }
  }
  return out;
}

std::vector<std::string> KeyValues::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : kv_)
    if (k.rfind(prefix, 0) == 0) out.push_back(k);
  return out;
}

RunConfig RunConfig::from_keyvalues(const KeyValues& kv) {
  RunConfig cfg;
  cfg.config_text = kv.text();
  cfg.run_id = kv.get_string_or("run.id", "run");
  cfg.out_dir = kv.get_string_or("out.dir", "out");
  cfg.workers = kv.get_int_or("workers", 1);
  if (cfg.workers < 1) fail(Errc::validation, "workers must be >= 1");

  // weight
  cfg.weight.period = kv.get_double("weight.period");
  cfg.weight.bc_profile = bc_profile_from_string(kv.get_string_or("weight.bc_profile", "periodic"));
  cfg.weight.id = kv.get_string_or("weight.id", "weight");
  for (int i = 0;; ++i) {
    std::string base = "weight.pieces[" + std::to_string(i) + "]";
    if (!kv.has(base + ".x0")) break;
    WeightPiece piece;
    piece.x0 = kv.get_double(base + ".x0");
    piece.x1 = kv.get_double(base + ".x1");
    if (kv.has(base + ".expr")) {
      piece.expr = Expr::parse(kv.get_string(base + ".expr"), "x");
    } else if (kv.has(base + ".table")) {
      std::istringstream ss(kv.get_string(base + ".table"));
      std::string pair;
      while (ss >> pair) {
        size_t colon = pair.find(':');
        if (colon == std::string::npos)
          fail(Errc::validation, "config: " + base + ".table entries must be x:y");
        piece.table.emplace_back(std::stod(pair.substr(0, colon)),
                                 std::stod(pair.substr(colon + 1)));
      }
    } else {
      fail(Errc::validation, "config: " + base + " needs .expr or .table");
    }
    cfg.weight.pieces.push_back(std::move(piece));
  }
  cfg.weight.validate();

  // nonlinearity
  std::string builtin = kv.get_string_or("g.builtin", "");
  if (!builtin.empty()) {
    if (builtin == "logistic_dominant")
      cfg.g = Nonlinearity::make_builtin(BuiltinG::logistic_dominant);
    else if (builtin == "logistic_haploid")
      cfg.g = Nonlinearity::make_builtin(BuiltinG::logistic_haploid);
    else
      fail(Errc::validation, "config: unknown g.builtin '" + builtin + "'");
  } else if (kv.has("g.expr")) {
    cfg.g = Nonlinearity::from_expr(kv.get_string("g.expr"), kv.get_string_or("g.deriv_expr", ""));
  } else {
    cfg.g = Nonlinearity::make_builtin(BuiltinG::logistic_dominant);
  }

  cfg.c = kv.get_double_or("problem.c", 0.0);
  cfg.lambda = kv.get_double("problem.lambda");
  cfg.mu = kv.get_double_or("problem.mu", cfg.lambda);
  if (!(cfg.lambda > 0.0)) fail(Errc::validation, "problem.lambda must be positive");
  if (!(cfg.mu > 0.0)) fail(Errc::validation, "problem.mu must be positive");
  cfg.bc = bc_kind_from_string(kv.get_string_or("problem.bc", "periodic"));
  cfg.k = kv.get_int_or("problem.k", 1);

  cfg.rho = kv.get_double_or("bands.rho", 0.5);
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) fail(Errc::validation, "bands.rho must lie in (0,1)");
  if (kv.has("bands.r")) cfg.r_override = kv.get_double("bands.r");
  if (kv.has("bands.R")) cfg.R_override = kv.get_double("bands.R");
  cfg.band_margin = kv.get_double_or("bands.margin", 1e-6);

  cfg.sign_tol = kv.get_double_or("tol.sign", 1e-10);
  cfg.quad_tol = kv.get_double_or("tol.quad", 1e-10);
  cfg.newton_tol = kv.get_double_or("tol.newton", 1e-10);
  cfg.interior_tol = kv.get_double_or("tol.interior", 1e-8);
  for (double t : {cfg.sign_tol, cfg.quad_tol, cfg.newton_tol, cfg.interior_tol})
    if (!(t > 0.0)) fail(Errc::validation, "tolerances must be positive");
  cfg.h = kv.get_double_or("integrator.h", 0.0);

  cfg.seed_budget = kv.get_int_or("census.seed_budget", 24);
  cfg.scan_points = kv.get_int_or("census.scan_points", 1200);

  cfg.subharmonic_k = kv.get_int_or("subharmonics.k", 2);
  if (kv.has("chaos.window")) {
    for (char ch : kv.get_string("chaos.window")) {
      if (ch < '0' || ch > '2') fail(Errc::validation, "chaos.window must be over {0,1,2}");
      cfg.chaos_window.push_back(ch - '0');
    }
  }
  cfg.chaos_n = kv.get_int_or("chaos.n", 1);
  if (kv.has("sweep.mu")) cfg.sweep_mu = kv.get_list("sweep.mu");
  if (kv.has("sweep.lambda_eq_mu")) cfg.sweep_lambda_mu = kv.get_list("sweep.lambda_eq_mu");
  for (const std::vector<double>* lst : {&cfg.sweep_mu, &cfg.sweep_lambda_mu})
    for (size_t i = 1; i < lst->size(); ++i)
      if (!((*lst)[i] > (*lst)[i - 1]))
        fail(Errc::validation, "sweep lists must be strictly increasing");
  cfg.sweep_shrink = kv.get_double_or("sweep.shrink", 0.05);
  cfg.solve_seed = kv.get_string_or("solve.seed", "");
  cfg.stability_profile = kv.get_string_or("stability.profile", "");
  cfg.stability_eps_convex = kv.get_double_or("stability.eps_convex", 0.0);
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  return from_keyvalues(KeyValues::parse_file(path));
}

std::unique_ptr<RunContext> RunContext::make(RunConfig cfg) {
  auto ctx = std::unique_ptr<RunContext>(new RunContext());
  ctx->cfg = std::move(cfg);
  ctx->decomp = decompose(ctx->cfg.weight, ctx->cfg.sign_tol);
  ctx->quad = quadratures(ctx->cfg.weight, ctx->decomp, ctx->cfg.quad_tol);
  ctx->params.c = ctx->cfg.c;
  ctx->params.lambda = ctx->cfg.lambda;
  ctx->params.mu = ctx->cfg.mu;
  ctx->params.weight = &ctx->cfg.weight;
  ctx->params.decomp = &ctx->decomp;
  ctx->params.g = &ctx->cfg.g;
  ctx->params.truncated = true;

  // band auto-policy: r = min(r_bar, rho/10), R = max(R_bar(rho), (1+rho)/2)
  // capped at 1 - 1e-4; explicit overrides win
  ctx->bands.rho = ctx->cfg.rho;
  ctx->bands.margin = ctx->cfg.band_margin;
  if (ctx->cfg.r_override) {
    ctx->bands.r = *ctx->cfg.r_override;
  } else {
    double rb = ctx->cfg.g.has_g0() ? r_bar(ctx->params, ctx->cfg.lambda) : ctx->cfg.rho / 10.0;
    ctx->bands.r = std::min(rb, ctx->cfg.rho / 10.0);
  }
  if (ctx->cfg.R_override) {
    ctx->bands.R = *ctx->cfg.R_override;
  } else {
    double Rb = R_bar(ctx->cfg.rho, ctx->params);
    ctx->bands.R = std::min(std::max(Rb, 0.5 * (1.0 + ctx->cfg.rho)), 1.0 - 1e-4);
  }
  if (!(ctx->bands.r > 0.0 && ctx->bands.r < ctx->bands.rho && ctx->bands.rho < ctx->bands.R &&
        ctx->bands.R < 1.0))
    fail(Errc::validation, "bands: need 0 < r < rho < R < 1");
  return ctx;
}

CensusOptions RunContext::census_options() const {
  CensusOptions opts;
  opts.seed_budget = cfg.seed_budget;
  opts.h = cfg.h;
  opts.newton_tol = cfg.newton_tol;
  opts.interior_tol = cfg.interior_tol;
  opts.scan_points = cfg.scan_points;
  opts.workers = cfg.workers;
  return opts;
}

BoundaryCondition RunContext::boundary() const {
  BoundaryCondition bc;
  bc.kind = cfg.bc;
  bc.k = cfg.bc == BcKind::periodic ? cfg.k : 1;
  return bc;
}

}  // namespace cline
