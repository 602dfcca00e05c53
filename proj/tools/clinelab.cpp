// clinelab: numerical laboratory for positive solutions of
//   u'' + c u' + (lambda a^+(x) - mu a^-(x)) g(u) = 0
// with a sign-changing periodic weight. Subcommands compute the explicit
// parameter thresholds, solve boundary value problems by shooting, run the
// coded-solution census and subharmonic searches, label linear stability,
// and trace asymptotic parameter sweeps.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cline/census.hpp"
#include "cline/config.hpp"
#include "cline/errors.hpp"
#include "cline/io.hpp"
#include "cline/stability.hpp"
#include "cline/thresholds.hpp"

using namespace cline;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  int workers = -1;
  int seed_budget = -1;
  double tol = -1.0;
  double h = -1.0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "config file (flat dotted keys)")->required();
  cmd->add_option("--out", flags.out_dir, "output directory (overrides out.dir)");
  cmd->add_option("--workers", flags.workers, "worker count (overrides workers)");
  cmd->add_option("--seed-budget", flags.seed_budget, "seeds per census target");
  cmd->add_option("--tol", flags.tol, "newton tolerance override");
  cmd->add_option("--h", flags.h, "integration step override");
}

std::unique_ptr<RunContext> load_context(const CommonFlags& flags) {
  RunConfig cfg = RunConfig::load(flags.config_path);
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (flags.workers > 0) cfg.workers = flags.workers;
  if (flags.seed_budget > 0) cfg.seed_budget = flags.seed_budget;
  if (flags.tol > 0) cfg.newton_tol = flags.tol;
  if (flags.h > 0) cfg.h = flags.h;
  return RunContext::make(std::move(cfg));
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

int run_thresholds(const CommonFlags& flags) {
  Timer timer;
  auto ctx = load_context(flags);
  LambdaStarCert cert = lambda_star(ctx->cfg.rho, ctx->params);
  MuStarLedger ledger =
      mu_star(ctx->cfg.lambda, ctx->bands.r, ctx->bands.rho, ctx->bands.R, ctx->params);
  ensure_dir(ctx->cfg.out_dir);
  std::string txt = ctx->cfg.out_dir + "/" + ctx->cfg.run_id + "_ledger.txt";
  std::string js = ctx->cfg.out_dir + "/" + ctx->cfg.run_id + "_ledger.json";
  write_ledger(txt, js, ledger, cert);
  for (const auto& [key, value] : ledger.flatten()) std::cout << key << " = " << value << "\n";
  if (!ledger.hyp_lambda)
    std::cout << "warning: lambda <= lambda*(rho); the multiplicity theorem does not certify "
                 "this parameter point (searches still run)\n";
  write_manifest(ctx->cfg.out_dir, ctx->cfg,
                 {ctx->cfg.run_id + "_ledger.txt", ctx->cfg.run_id + "_ledger.json"},
                 timer.seconds());
  return 0;
}

int run_solve(const CommonFlags& flags) {
  Timer timer;
  auto ctx = load_context(flags);
  if (ctx->cfg.solve_seed.empty())
    fail(Errc::validation, "solve needs solve.seed in the config");
  std::vector<double> seed;
  std::istringstream ss(ctx->cfg.solve_seed);
  std::string item;
  while (std::getline(ss, item, ',')) seed.push_back(std::stod(item));
  BoundaryCondition bc = ctx->boundary();
  NewtonOptions no;
  no.tol = ctx->cfg.newton_tol;
  no.h = ctx->cfg.h;
  no.interior_tol = ctx->cfg.interior_tol;
  SolutionProfile prof = newton(bc, seed, ctx->params, no);
  try {
    prof.symbols = classify(prof, ctx->bands, true);
  } catch (const Error&) {
    // profile stays unclassified; maxima are still reported
  }
  ensure_dir(ctx->cfg.out_dir);
  std::string fname = ctx->cfg.run_id + "_profile.dat";
  write_profile(ctx->cfg.out_dir + "/" + fname, prof);
  std::cout << "residual = " << prof.residual << "\n";
  std::cout << "interior = " << prof.interior << "\n";
  if (!prof.symbols.empty()) std::cout << "string = " << prof.symbol_string() << "\n";
  write_manifest(ctx->cfg.out_dir, ctx->cfg, {fname}, timer.seconds());
  return 0;
}

MuStarLedger ledger_for(const RunContext& ctx) {
  return mu_star(ctx.cfg.lambda, ctx.bands.r, ctx.bands.rho, ctx.bands.R, ctx.params);
}

int run_census_cmd(const CommonFlags& flags) {
  Timer timer;
  auto ctx = load_context(flags);
  MuStarLedger ledger = ledger_for(*ctx);
  CensusReport rep =
      run_census(ctx->params, ctx->boundary(), ctx->bands, ctx->census_options(), &ledger);
  std::vector<std::string> files = write_census_report(ctx->cfg.out_dir, ctx->cfg.run_id, rep);
  std::cout << "found " << rep.found << " / " << rep.entries.size() << " coded solutions ("
            << rep.missing << " missing, theorem count " << rep.theorem_count << ")\n";
  if (!rep.hyp_mu)
    std::cout << "warning: mu <= mu*(lambda,r,R); existence in every box is not certified at "
                 "this parameter point\n";
  for (const CensusEntry& e : rep.entries)
    if (!e.profile)
      std::cout << "missing: " << e.target.str() << " after " << e.attempts << " attempts\n";
  write_manifest(ctx->cfg.out_dir, ctx->cfg, files, timer.seconds());
  return rep.missing == 0 ? 0 : 2;
}

int run_subharmonics_cmd(const CommonFlags& flags) {
  Timer timer;
  auto ctx = load_context(flags);
  MuStarLedger ledger = ledger_for(*ctx);
  CensusReport rep = subharmonic_census(ctx->params, ctx->cfg.subharmonic_k, ctx->bands,
                                        ctx->census_options(), &ledger);
  int minimal = 0;
  for (const CensusEntry& e : rep.entries)
    if (e.profile && e.minimal_period) ++minimal;
  std::vector<std::string> files = write_census_report(ctx->cfg.out_dir, ctx->cfg.run_id, rep);
  std::cout << "order-" << ctx->cfg.subharmonic_k << " subharmonics: " << minimal
            << " minimal-period solutions (Witt lower bound " << rep.theorem_count << ")\n";
  write_manifest(ctx->cfg.out_dir, ctx->cfg, files, timer.seconds());
  return 0;
}

int run_chaos_cmd(const CommonFlags& flags) {
  Timer timer;
  auto ctx = load_context(flags);
  if (ctx->cfg.chaos_window.empty())
    fail(Errc::validation, "chaos needs chaos.window in the config");
  ChaosResult res = chaos_approx(ctx->params, ctx->bands, ctx->cfg.chaos_window,
                                 ctx->cfg.chaos_n, ctx->census_options());
  ensure_dir(ctx->cfg.out_dir);
  std::string fname = ctx->cfg.run_id + "_chaos_n" + std::to_string(ctx->cfg.chaos_n) + ".dat";
  write_profile(ctx->cfg.out_dir + "/" + fname, res.profile);
  std::cout << "central band maxima:";
  for (double v : res.central_maxima) std::cout << " " << v;
  std::cout << "\n";
  write_manifest(ctx->cfg.out_dir, ctx->cfg, {fname}, timer.seconds());
  return 0;
}

int run_stability_cmd(const CommonFlags& flags) {
  Timer timer;
  auto ctx = load_context(flags);
  if (ctx->cfg.stability_profile.empty())
    fail(Errc::validation, "stability needs stability.profile (a profile file)");
  SolutionProfile prof = read_profile(ctx->cfg.stability_profile);
  StabilityResult res = principal_eigenvalue(prof, ctx->params);
  prof.nu0 = res.nu0;
  prof.stability = res.label;
  std::cout << "nu0 = " << res.nu0 << " (" << res.label << ")";
  if (!res.convention.empty()) std::cout << " [" << res.convention << "]";
  std::cout << "\n";
  ensure_dir(ctx->cfg.out_dir);
  std::string fname = ctx->cfg.run_id + "_stability.dat";
  write_profile(ctx->cfg.out_dir + "/" + fname, prof);
  write_manifest(ctx->cfg.out_dir, ctx->cfg, {fname}, timer.seconds());
  return 0;
}

int run_sweep_cmd(const CommonFlags& flags) {
  Timer timer;
  auto ctx = load_context(flags);
  SweepResult res = run_sweep(*ctx);
  write_sweep(ctx->cfg.out_dir, ctx->cfg.run_id, res);
  std::vector<std::string> files{ctx->cfg.run_id + "_sweep.json", ctx->cfg.run_id + "_plot.py"};
  for (const SweepRow& row : res.rows) files.push_back(row.profile_file);
  for (const SweepRow& row : res.rows) {
    std::cout << "param " << row.param << ": sup_norm " << row.sup_norm << ", sup over shrunk";
    for (double v : row.sup_neg) std::cout << " I-:" << v;
    std::cout << "\n";
  }
  write_manifest(ctx->cfg.out_dir, ctx->cfg, files, timer.seconds());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clinelab: coded positive solutions of indefinite-weight problems"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* cmd_thresholds = app.add_subcommand("thresholds", "compute the full threshold ledger");
  auto* cmd_solve = app.add_subcommand("solve", "one shooting solve from solve.seed");
  auto* cmd_census = app.add_subcommand("census", "populate every nonzero coded box");
  auto* cmd_sub = app.add_subcommand("subharmonics", "order-k subharmonic census");
  auto* cmd_chaos = app.add_subcommand("chaos", "finite-window approximation of a coded orbit");
  auto* cmd_stab = app.add_subcommand("stability", "principal eigenvalue of a stored profile");
  auto* cmd_sweep = app.add_subcommand("sweep", "follow the large branch across a parameter list");
  for (CLI::App* cmd :
       {cmd_thresholds, cmd_solve, cmd_census, cmd_sub, cmd_chaos, cmd_stab, cmd_sweep})
    add_common(cmd, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_thresholds->parsed()) return run_thresholds(flags);
    if (cmd_solve->parsed()) return run_solve(flags);
    if (cmd_census->parsed()) return run_census_cmd(flags);
    if (cmd_sub->parsed()) return run_subharmonics_cmd(flags);
    if (cmd_chaos->parsed()) return run_chaos_cmd(flags);
    if (cmd_stab->parsed()) return run_stability_cmd(flags);
    if (cmd_sweep->parsed()) return run_sweep_cmd(flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
