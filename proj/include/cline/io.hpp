#pragma once

// Deterministic result serialization: profiles as delimited text with a
// key-value header, reports and ledgers as JSON, a manifest per run, and a
// plot companion script that references only the emitted data files.

#include <string>
#include <vector>

#include "cline/census.hpp"
#include "cline/config.hpp"
#include "cline/solver.hpp"
#include "cline/thresholds.hpp"

namespace cline {

void ensure_dir(const std::string& dir);

// profile files: "# key = value" header block, then columns x u uprime
void write_profile(const std::string& path, const SolutionProfile& profile);
SolutionProfile read_profile(const std::string& path);

void write_ledger(const std::string& path_txt, const std::string& path_json,
                  const MuStarLedger& ledger, const LambdaStarCert& cert);
MuStarLedger read_ledger_json(const std::string& path);

// census/subharmonic report; emits one profile file per found solution next
// to the report and returns the list of files written
std::vector<std::string> write_census_report(const std::string& dir, const std::string& run_id,
                                             const CensusReport& report);

struct SweepRow {
  double param = 0.0;  // mu, or lambda (= mu)
  std::vector<double> sup_pos, inf_pos;  // per positivity-interval compact
  std::vector<double> sup_neg;           // per negativity-interval compact
  double sup_norm = 0.0;
  std::string profile_file;
};

struct SweepResult {
  std::string mode;  // "mu" or "lambda_eq_mu"
  double shrink = 0.05;
  std::vector<SweepRow> rows;
};

void write_sweep(const std::string& dir, const std::string& run_id, const SweepResult& result);

// manifest: config hash, library version, wall time, outputs
void write_manifest(const std::string& dir, const RunConfig& cfg,
                    const std::vector<std::string>& outputs, double wall_seconds);

std::string library_version();
unsigned long long fnv1a64(const std::string& text);

// The asymptotic sweep runner: follows the large solution by continuation
// across the parameter list (bisecting failed gaps up to 6 times); for each
// value records interior-compact sups over the intervals shrunk by
// `shrink` per side. Throws ContinuationLost.
SweepResult run_sweep(RunContext& ctx);

}  // namespace cline
