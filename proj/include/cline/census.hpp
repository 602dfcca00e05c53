#pragma once

// Enumerates the coded-solution targets, drives the solver to populate every
// box, and assembles reports: the 3^m - 1 census, the two-solution search,
// order-k subharmonics against the Witt lower bound, and finite-window
// approximations of bi-infinite codes.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cline/solver.hpp"
#include "cline/thresholds.hpp"

namespace cline {

struct SymbolString {
  std::vector<int> symbols;  // over {0,1,2}, length m*k
  int m = 0, k = 1;

  bool nonzero() const;
  std::string str() const;
  static SymbolString from_string(const std::string& s, int m, int k);
};

// Moebius function: mu(1) = 1, (-1)^q on squarefree l with q prime factors,
// 0 otherwise.
int moebius(long l);

struct WittCount {
  int m = 0, k = 0;
  unsigned long long value = 0;  // Sigma_{3^m}(k); 3^40 needs the unsigned width
};

// Witt's formula Sigma_{3^m}(k) = (1/k) sum_{l | k} mu(l) 3^{mk/l}, exact
// integer arithmetic; throws Overflow when 3^{mk} exceeds the integer width
// (mk <= 40 supported).
WittCount witt(int m, int k);

// Brute-force count of aperiodic necklaces of length k over 3^m colors
// (test oracle; feasible for mk <= 12).
long long count_aperiodic_necklaces_bruteforce(int m, int k);

// All nonzero strings of length m (k = 1), lexicographic.
std::vector<SymbolString> all_nonzero_strings(int m);
// One lexicographically-minimal representative per aperiodic necklace of
// k blocks of length m (subharmonic targets; block-periodic strings of
// smaller period are rejected).
std::vector<SymbolString> subharmonic_targets(int m, int k);

struct CensusEntry {
  SymbolString target;
  std::optional<SolutionProfile> profile;
  int attempts = 0;
  std::string note;
  bool minimal_period = false;  // subharmonic census only
};

struct CensusReport {
  std::vector<CensusEntry> entries;  // sorted by target string
  int found = 0, missing = 0;
  long long theorem_count = 0;       // 3^{mk} - 1, or the Witt bound
  bool hyp_lambda = false, hyp_mu = false;
  double lambda_star = 0.0, mu_star_val = 0.0;
  std::vector<std::string> duplicates;  // must stay empty

  const CensusEntry* find(const std::string& s) const;
};

struct CensusOptions {
  int seed_budget = 24;
  double h = 0.0;              // integration step (0: span/4000)
  double newton_tol = 1e-10;
  double interior_tol = 1e-8;
  int scan_points = 1200;      // initial scan density for scalar shooting
  int workers = 1;
  double distinct_tol = 1e-6;  // solution identity threshold (max-norm)
};

// Theorem-count census over all nonzero strings of length m. The
// lambda > lambda*(rho) and mu > mu*(lambda) hypotheses are evaluated and
// recorded; violations warn and proceed (the conditions are sufficient
// only -- the desk-scale reproductions run far below the certified region).
CensusReport run_census(const ProblemParams& params, const BoundaryCondition& bc,
                        const Bands& bands, const CensusOptions& opts,
                        const MuStarLedger* ledger = nullptr);

// One solution with sup-norm in (0, rho), one in (rho, 1); throws BoxEmpty
// naming the box that stayed empty.
std::pair<SolutionProfile, SolutionProfile> run_two_solutions(const ProblemParams& params,
                                                              const BoundaryCondition& bc,
                                                              double rho,
                                                              const CensusOptions& opts);

// Periodic census on [0, kP] over the necklace representatives, with
// minimal-period labels and the Witt lower-bound comparison.
CensusReport subharmonic_census(const ProblemParams& params, int k, const Bands& bands,
                                const CensusOptions& opts, const MuStarLedger* ledger = nullptr);

// Solves the (2n+1)P-periodic problem whose string is the zero-padded
// window, on [-nP, (n+1)P]; returns the profile together with the band
// maxima of the central period.
struct ChaosResult {
  SolutionProfile profile;
  std::vector<double> central_maxima;
};
ChaosResult chaos_approx(const ProblemParams& params, const Bands& bands,
                         const std::vector<int>& window, int n, const CensusOptions& opts);

}  // namespace cline
