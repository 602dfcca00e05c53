#include "cline/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cline/errors.hpp"

namespace cline {

using nlohmann::json;

std::string library_version() { return "0.1.0"; }

unsigned long long fnv1a64(const std::string& text) {
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(Errc::io_error, "cannot create directory '" + dir + "': " + ec.message());
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16g", v);
  return buf;
}

}  // namespace

void write_profile(const std::string& path, const SolutionProfile& p) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write '" + path + "'");
  out << "# cline profile\n";
  out << "# bc = " << bc_kind_name(p.bc.kind) << "\n";
  out << "# k = " << p.bc.k << "\n";
  out << "# x0 = " << fmt(p.traj.x0()) << "\n";
  out << "# x1 = " << fmt(p.traj.x1()) << "\n";
  out << "# c = " << fmt(p.c) << "\n";
  out << "# lambda = " << fmt(p.lambda) << "\n";
  out << "# mu = " << fmt(p.mu) << "\n";
  out << "# weight_id = " << p.weight_id << "\n";
  out << "# g = " << p.g_id << "\n";
  out << "# residual = " << fmt(p.residual) << "\n";
  out << "# interior = " << (p.interior ? 1 : 0) << "\n";
  if (!p.symbols.empty()) out << "# string = " << p.symbol_string() << "\n";
  for (size_t i = 0; i < p.band_maxima.size(); ++i)
    out << "# band_max[" << i << "] = " << fmt(p.band_maxima[i]) << "\n";
  if (p.nu0) out << "# nu0 = " << fmt(*p.nu0) << "\n";
  if (!p.stability.empty()) out << "# stability = " << p.stability << "\n";
  out << "# columns: x u uprime\n";
  for (size_t i = 0; i < p.traj.x.size(); ++i)
    out << fmt(p.traj.x[i]) << " " << fmt(p.traj.u[i]) << " " << fmt(p.traj.v[i]) << "\n";
  if (!out) fail(Errc::io_error, "short write to '" + path + "'");
}

SolutionProfile read_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot read '" + path + "'");
  SolutionProfile p;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key, eq, value;
      ss >> key >> eq;
      std::getline(ss, value);
      size_t a = value.find_first_not_of(' ');
      if (a != std::string::npos) value = value.substr(a);
      if (eq != "=") continue;
      if (key == "bc") p.bc.kind = bc_kind_from_string(value);
      else if (key == "k") p.bc.k = std::stoi(value);
      else if (key == "x0") p.bc.x0 = std::stod(value);
      else if (key == "c") p.c = std::stod(value);
      else if (key == "lambda") p.lambda = std::stod(value);
      else if (key == "mu") p.mu = std::stod(value);
      else if (key == "weight_id") p.weight_id = value;
      else if (key == "g") p.g_id = value;
      else if (key == "residual") p.residual = std::stod(value);
      else if (key == "interior") p.interior = value == "1";
      else if (key == "string")
        for (char c : value)
          if (c >= '0' && c <= '2') p.symbols.push_back(c - '0');
      continue;
    }
    std::istringstream ss(line);
    double x, u, v;
    if (ss >> x >> u >> v) {
      p.traj.x.push_back(x);
      p.traj.u.push_back(u);
      p.traj.v.push_back(v);
    }
  }
  if (p.traj.x.size() < 2) fail(Errc::io_error, "profile '" + path + "' has no data rows");
  return p;
}

void write_ledger(const std::string& path_txt, const std::string& path_json,
                  const MuStarLedger& ledger, const LambdaStarCert& cert) {
  {
    std::ofstream out(path_txt);
    if (!out) fail(Errc::io_error, "cannot write '" + path_txt + "'");
    out << "lambda_star.rho = " << fmt(cert.rho) << "\n";
    out << "lambda_star.epsilon = " << fmt(cert.epsilon) << "\n";
    for (size_t i = 0; i < cert.delta.size(); ++i) {
      out << "lambda_star.delta[" << i + 1 << "] = " << fmt(cert.delta[i]) << "\n";
      out << "lambda_star.eta[" << i + 1 << "] = " << fmt(cert.eta[i]) << "\n";
    }
    out << "lambda_star.value = " << fmt(cert.lambda_star) << "\n";
    for (const auto& [key, value] : ledger.flatten())
      out << key << " = " << fmt(value) << "\n";
    for (const std::string& s : ledger.skipped) out << "skipped = " << s << "\n";
  }
  json j;
  j["lambda_star"] = {{"rho", cert.rho},
                      {"epsilon", cert.epsilon},
                      {"delta", cert.delta},
                      {"eta", cert.eta},
                      {"per_interval", cert.per_interval},
                      {"value", cert.lambda_star}};
  json jl;
  for (const auto& [key, value] : ledger.flatten()) jl[key] = value;
  jl["skipped"] = ledger.skipped;
  j["mu_star_ledger"] = jl;
  std::ofstream out(path_json);
  if (!out) fail(Errc::io_error, "cannot write '" + path_json + "'");
  out << j.dump(2) << "\n";
}

MuStarLedger read_ledger_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot read '" + path + "'");
  json j;
  in >> j;
  const json& jl = j.at("mu_star_ledger");
  MuStarLedger L;
  L.lambda = jl.at("lambda");
  L.r = jl.at("r");
  L.rho = jl.at("rho");
  L.R = jl.at("R");
  L.mu_H1 = jl.at("mu_H1");
  L.mu_H3 = jl.at("mu_H3");
  L.mu_sharp = jl.at("mu_sharp");
  L.mu_star = jl.at("mu_star");
  return L;
}

std::vector<std::string> write_census_report(const std::string& dir, const std::string& run_id,
                                             const CensusReport& report) {
  ensure_dir(dir);
  std::vector<std::string> files;
  json entries = json::array();
  for (const CensusEntry& e : report.entries) {
    json je;
    je["string"] = e.target.str();
    je["status"] = e.profile ? "found" : "missing";
    je["attempts"] = e.attempts;
    if (!e.note.empty()) je["note"] = e.note;
    if (e.target.k > 1) je["minimal_period_order_k"] = e.minimal_period;
    if (e.profile) {
      std::string fname = run_id + "_profile_" + e.target.str() + ".dat";
      write_profile(dir + "/" + fname, *e.profile);
      files.push_back(fname);
      je["file"] = fname;
      je["residual"] = e.profile->residual;
      je["band_maxima"] = e.profile->band_maxima;
      je["interior"] = e.profile->interior;
      if (e.profile->nu0) {
        je["nu0"] = *e.profile->nu0;
        je["stability"] = e.profile->stability;
      }
    }
    entries.push_back(je);
  }
  json j;
  j["entries"] = entries;
  j["found"] = report.found;
  j["missing"] = report.missing;
  j["theorem_count"] = report.theorem_count;
  j["duplicates"] = report.duplicates;
  j["hypothesis"] = {{"lambda_gt_lambda_star", report.hyp_lambda},
                     {"mu_gt_mu_star", report.hyp_mu},
                     {"lambda_star", report.lambda_star},
                     {"mu_star", report.mu_star_val}};
  std::string rep = dir + "/" + run_id + "_census.json";
  std::ofstream out(rep);
  if (!out) fail(Errc::io_error, "cannot write '" + rep + "'");
  out << j.dump(2) << "\n";
  files.push_back(run_id + "_census.json");
  return files;
}

void write_sweep(const std::string& dir, const std::string& run_id, const SweepResult& result) {
  ensure_dir(dir);
  json rows = json::array();
  for (const SweepRow& r : result.rows) {
    rows.push_back({{"param", r.param},
                    {"sup_pos_compact", r.sup_pos},
                    {"inf_pos_compact", r.inf_pos},
                    {"sup_neg_compact", r.sup_neg},
                    {"sup_norm", r.sup_norm},
                    {"file", r.profile_file}});
  }
  json j;
  j["mode"] = result.mode;
  j["shrink"] = result.shrink;
  j["rows"] = rows;
  std::string rep = dir + "/" + run_id + "_sweep.json";
  std::ofstream out(rep);
  if (!out) fail(Errc::io_error, "cannot write '" + rep + "'");
  out << j.dump(2) << "\n";

  // plot companion: overlays the per-step profiles from the data files only
  std::string script = dir + "/" + run_id + "_plot.py";
  std::ofstream py(script);
  py << "#!/usr/bin/env python3\n"
        "# overlay plot for the sweep profiles; reads only the .dat files\n"
        "import json, sys, os\n"
        "import matplotlib\n"
        "matplotlib.use('Agg')\n"
        "import matplotlib.pyplot as plt\n"
        "here = os.path.dirname(os.path.abspath(__file__))\n"
        "rep = json.load(open(os.path.join(here, '" << run_id << "_sweep.json')))\n"
        "for row in rep['rows']:\n"
        "    xs, us = [], []\n"
        "    for line in open(os.path.join(here, row['file'])):\n"
        "        if line.startswith('#'): continue\n"
        "        cols = line.split()\n"
        "        xs.append(float(cols[0])); us.append(float(cols[1]))\n"
        "    plt.plot(xs, us, label=f\"{row['param']:g}\")\n"
        "plt.xlabel('x'); plt.ylabel('u'); plt.ylim(0, 1)\n"
        "plt.legend(fontsize=6)\n"
        "plt.savefig(os.path.join(here, '" << run_id << "_sweep.png'), dpi=160)\n";
}

void write_manifest(const std::string& dir, const RunConfig& cfg,
                    const std::vector<std::string>& outputs, double wall_seconds) {
  ensure_dir(dir);
  json j;
  j["run_id"] = cfg.run_id;
  j["config_fnv1a64"] = fnv1a64(cfg.config_text);
  j["version"] = library_version();
  j["outputs"] = outputs;
  j["wall_seconds"] = wall_seconds;  // timestamp-like field, excluded from determinism checks
  std::string path = dir + "/" + cfg.run_id + "_manifest.json";
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

SweepResult run_sweep(RunContext& ctx) {
  const std::vector<double>& list =
      !ctx.cfg.sweep_mu.empty() ? ctx.cfg.sweep_mu : ctx.cfg.sweep_lambda_mu;
  const bool both = ctx.cfg.sweep_mu.empty();
  if (list.empty()) fail(Errc::validation, "sweep: provide sweep.mu or sweep.lambda_eq_mu");

  SweepResult result;
  result.mode = both ? "lambda_eq_mu" : "mu";
  result.shrink = ctx.cfg.sweep_shrink;

  BoundaryCondition bc = ctx.boundary();
  const NodalDecomposition& d = ctx.decomp;
  double span_lo = bc.x0, span_hi = bc.x0 + bc.span(ctx.cfg.weight.period);
  std::vector<Interval> pos = positivity_intervals(d, span_lo, span_hi);
  std::vector<Interval> neg = negativity_intervals(d, span_lo, span_hi);
  auto shrunk = [&](const Interval& iv) {
    double margin = result.shrink * iv.length();
    return Interval{iv.lo + margin, iv.hi - margin};
  };

  ProblemParams params = ctx.params;  // local copy; lambda/mu vary along the list
  auto set_param = [&](double value) {
    params.mu = value;
    if (both) params.lambda = value;
  };

  NewtonOptions no;
  no.tol = ctx.cfg.newton_tol;
  no.h = ctx.cfg.h;
  no.interior_tol = ctx.cfg.interior_tol;

  // first value: locate the large branch by the two-solution search
  set_param(list.front());
  CensusOptions copts = ctx.census_options();
  SolutionProfile current = run_two_solutions(params, bc, ctx.cfg.rho, copts).second;

  ensure_dir(ctx.cfg.out_dir);
  auto record = [&](double value, const SolutionProfile& prof) {
    SweepRow row;
    row.param = value;
    for (const Interval& iv : pos) {
      Interval c = shrunk(iv);
      row.sup_pos.push_back(max_on_interval(prof.traj, c).u_max);
      double inf = 1e300;
      for (size_t i = 0; i < prof.traj.x.size(); ++i)
        if (prof.traj.x[i] >= c.lo && prof.traj.x[i] <= c.hi)
          inf = std::min(inf, prof.traj.u[i]);
      row.inf_pos.push_back(inf);
    }
    for (const Interval& iv : neg) row.sup_neg.push_back(max_on_interval(prof.traj, shrunk(iv)).u_max);
    row.sup_norm = prof.traj.max_u();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_sweep_%.6g.dat", ctx.cfg.run_id.c_str(), value);
    row.profile_file = buf;
    write_profile(ctx.cfg.out_dir + "/" + row.profile_file, prof);
    result.rows.push_back(row);
  };
  record(list.front(), current);

  // continuation: previous profile seeds the next solve; a failed step
  // bisects the parameter gap (geometrically) up to 6 times
  for (size_t i = 1; i < list.size(); ++i) {
    double from = list[i - 1], to = list[i];
    std::function<SolutionProfile(double, double, const SolutionProfile&, int)> advance =
        [&](double a, double b, const SolutionProfile& seed, int depth) -> SolutionProfile {
      set_param(b);
      try {
        SolutionProfile prof = solve_multishoot(bc, path_from_profile(seed), params, no);
        if (prof.traj.max_u() <= ctx.cfg.rho)
          fail(Errc::continuation_lost, "left the large branch");
        return prof;
      } catch (const Error&) {
        if (depth >= 6)
          fail(Errc::continuation_lost,
               "sweep: Newton failed at parameter " + std::to_string(b) +
                   " after bisecting the gap 6 times");
        double mid = std::sqrt(a * b);  // parameter gaps span decades
        SolutionProfile half = advance(a, mid, seed, depth + 1);
        return advance(mid, b, half, depth + 1);
      }
    };
    current = advance(from, to, current, 0);
    record(to, current);
  }
  return result;
}

}  // namespace cline
