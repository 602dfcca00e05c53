#include "cline/census.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "cline/errors.hpp"

namespace cline {

bool SymbolString::nonzero() const {
  return std::any_of(symbols.begin(), symbols.end(), [](int s) { return s != 0; });
}

std::string SymbolString::str() const {
  std::string s;
  for (int v : symbols) s += static_cast<char>('0' + v);
  return s;
}

SymbolString SymbolString::from_string(const std::string& s, int m, int k) {
  SymbolString out;
  out.m = m;
  out.k = k;
  for (char c : s) {
    if (c < '0' || c > '2') fail(Errc::validation, "symbol string must be over {0,1,2}");
    out.symbols.push_back(c - '0');
  }
  if (static_cast<int>(out.symbols.size()) != m * k)
    fail(Errc::validation, "symbol string length must be m*k");
  return out;
}

int moebius(long l) {
  if (l < 1) fail(Errc::validation, "moebius: argument must be >= 1");
  int q = 0;
  for (long p = 2; p * p <= l; ++p) {
    if (l % p == 0) {
      l /= p;
      if (l % p == 0) return 0;  // square factor
      ++q;
    }
  }
  if (l > 1) ++q;
  return q % 2 == 0 ? 1 : -1;
}

WittCount witt(int m, int k) {
  if (m < 1 || k < 1) fail(Errc::validation, "witt: need m >= 1 and k >= 1");
  if (m * k > 40) fail(Errc::overflow, "witt: 3^(mk) exceeds the supported integer width");
  auto pow3 = [](int e) {
    __int128 v = 1;
    for (int i = 0; i < e; ++i) v *= 3;
    return v;
  };
  __int128 sum = 0;
  for (int l = 1; l <= k; ++l)
    if (k % l == 0) sum += static_cast<__int128>(moebius(l)) * pow3(m * k / l);
  __int128 value = sum / k;  // Witt sums are divisible by k
  return {m, k, static_cast<unsigned long long>(value)};
}

long long count_aperiodic_necklaces_bruteforce(int m, int k) {
  // strings of k blocks of length m over {0,1,2}; a necklace rotates blocks
  const int n = m * k;
  long long total = 0;
  std::vector<int> s(n, 0);
  auto block_rotate_equal = [&](int shift_blocks) {
    for (int i = 0; i < n; ++i)
      if (s[i] != s[(i + shift_blocks * m) % n]) return false;
    return true;
  };
  for (long long code = 0; code < static_cast<long long>(std::pow(3.0, n) + 0.5); ++code) {
    long long c = code;
    for (int i = 0; i < n; ++i) {
      s[i] = c % 3;
      c /= 3;
    }
    bool aperiodic = true;
    for (int l = 1; l < k; ++l)
      if (k % l == 0 && block_rotate_equal(l)) {
        aperiodic = false;
        break;
      }
    if (aperiodic) ++total;
  }
  return total / k;
}

std::vector<SymbolString> all_nonzero_strings(int m) {
  std::vector<SymbolString> out;
  std::vector<int> s(m, 0);
  for (;;) {
    // increment ternary counter
    int i = m - 1;
    while (i >= 0 && s[i] == 2) s[i--] = 0;
    if (i < 0) break;
    ++s[i];
    SymbolString str;
    str.symbols = s;
    str.m = m;
    str.k = 1;
    out.push_back(str);
  }
  std::sort(out.begin(), out.end(),
            [](const SymbolString& a, const SymbolString& b) { return a.symbols < b.symbols; });
  return out;
}

std::vector<SymbolString> subharmonic_targets(int m, int k) {
  if (k < 2) fail(Errc::validation, "subharmonic targets need k >= 2");
  const int n = m * k;
  if (n > 20) fail(Errc::overflow, "subharmonic target enumeration too large");
  std::vector<SymbolString> out;
  std::vector<int> s(n, 0);
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (int i = 0; i < n; ++i) {
      s[i] = static_cast<int>(c % 3);
      c /= 3;
    }
    // block-aperiodic?
    bool aperiodic = true;
    for (int l = 1; l < k && aperiodic; ++l) {
      if (k % l != 0) continue;
      bool equal = true;
      for (int i = 0; i < n && equal; ++i) equal = s[i] == s[(i + l * m) % n];
      if (equal) aperiodic = false;
    }
    if (!aperiodic) continue;
    // lexicographically minimal under block rotations?
    bool minimal = true;
    for (int rot = 1; rot < k && minimal; ++rot) {
      std::vector<int> t(n);
      for (int i = 0; i < n; ++i) t[i] = s[(i + rot * m) % n];
      if (t < s) minimal = false;
    }
    if (!minimal) continue;
    SymbolString str;
    str.symbols = s;
    str.m = m;
    str.k = k;
    out.push_back(str);
  }
  std::sort(out.begin(), out.end(),
            [](const SymbolString& a, const SymbolString& b) { return a.symbols < b.symbols; });
  return out;
}

const CensusEntry* CensusReport::find(const std::string& s) const {
  for (const CensusEntry& e : entries)
    if (e.target.str() == s) return &e;
  return nullptr;
}

namespace {

// Scalar shooting scan for the Neumann/Dirichlet problems: samples the
// boundary residual over a stratified grid, bisects sign changes, and
// recursively refines wherever the trajectory code flips without a sign
// change (coded roots cluster hierarchically).
struct ScanHit {
  double y0;
  SolutionProfile profile;
};

class ScalarScanner {
 public:
  ScalarScanner(const ProblemParams& params, const BoundaryCondition& bc, const Bands& bands,
                const CensusOptions& opts)
      : params_(params), bc_(bc), bands_(bands), opts_(opts) {
    p_ = params_;
    p_.truncated = true;
    h_ = opts.h > 0.0 ? opts.h : bc.span(params.weight->period) / 4000.0;
    pos_ = positivity_intervals(*params.decomp, bc.x0, bc.x1(params.weight->period));
  }

  struct Sample {
    double y0;
    double F;
    std::vector<int> code;
  };

  // Scan code per positivity interval: -1 when the trajectory dips negative
  // there, 0/1/2 for the band of the maximum, 3 above R; plus the band of the
  // final state. Coded roots cluster in windows whose edges flip exactly one
  // of these bins, so refinement on any bin change corners them even when the
  // window is orders of magnitude narrower than the grid pitch.
  Sample eval(double y0) {
    IntegrateOptions io;
    io.h = h_;
    Trajectory t = bc_.kind == BcKind::neumann
                       ? integrate(p_, bc_.x0, bc_.x1(P()), y0, 0.0, io)
                       : integrate(p_, bc_.x0, bc_.x1(P()), 0.0, y0, io);
    Sample s;
    s.y0 = y0;
    s.F = bc_.kind == BcKind::neumann ? t.v_end() : t.u_end();
    auto bin = [&](double v) {
      return v < bands_.r ? 0 : (v < bands_.rho ? 1 : (v < bands_.R ? 2 : 3));
    };
    for (const Interval& iv : pos_) {
      double vmax = -1e300, vmin = 1e300;
      for (size_t i = 0; i < t.x.size(); ++i) {
        if (t.x[i] < iv.lo - 1e-12 || t.x[i] > iv.hi + 1e-12) continue;
        vmax = std::max(vmax, t.u[i]);
        vmin = std::min(vmin, t.u[i]);
      }
      s.code.push_back(vmin < -1e-12 ? -1 : bin(vmax));
    }
    s.code.push_back(t.u_end() < -1e-12 ? -1 : bin(t.u_end()));
    return s;
  }

  std::vector<double> run() {
    std::vector<double> grid = make_grid();
    std::vector<Sample> samples;
    samples.reserve(grid.size());
    for (double y : grid) samples.push_back(eval(y));
    std::vector<double> roots;
    for (size_t i = 0; i + 1 < samples.size(); ++i) refine(samples[i], samples[i + 1], roots, 0);
    std::sort(roots.begin(), roots.end());
    return roots;
  }

 private:
  double P() const { return params_.weight->period; }

  std::vector<double> make_grid() {
    std::vector<double> g;
    const int n = std::max(opts_.scan_points, 64);
    if (bc_.kind == BcKind::neumann) {
      // u0 in (0,1): log ladder below 0.2, linear above, extra density near 1
      int n_log = n / 3, n_lin = n - n_log;
      for (int i = 0; i < n_log; ++i)
        g.push_back(1e-7 * std::pow(0.2 / 1e-7, static_cast<double>(i) / (n_log - 1)));
      for (int i = 0; i < n_lin; ++i)
        g.push_back(0.2 + (1.0 - 1e-6 - 0.2) * static_cast<double>(i) / (n_lin - 1));
    } else {
      // initial slope for Dirichlet: symmetric log ladder
      double vmax = 4.0 * bands_.R / params_.decomp->pos(0).length();
      int half = n / 2;
      for (int i = 0; i < half; ++i)
        g.push_back(1e-7 * std::pow(vmax / 1e-7, static_cast<double>(i) / (half - 1)));
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
  }

  void refine(const Sample& a, const Sample& b, std::vector<double>& roots, int depth) {
    if (a.F == 0.0) {
      roots.push_back(a.y0);
      return;
    }
    if (a.F * b.F < 0.0) {
      roots.push_back(bisect_root(a.y0, b.y0));
      // both sides may still hide code flips
    }
    if (a.code == b.code) return;
    double rel = (b.y0 - a.y0) / (std::abs(a.y0) + std::abs(b.y0) + 1e-300);
    if (depth > 64 || rel < 1e-14) return;
    Sample mid = eval(0.5 * (a.y0 + b.y0));
    refine(a, mid, roots, depth + 1);
    refine(mid, b, roots, depth + 1);
  }

  double bisect_root(double lo, double hi) {
    double flo = eval(lo).F;
    for (int i = 0; i < 200 && hi - lo > 1e-16 * (1.0 + std::abs(hi)); ++i) {
      double mid = 0.5 * (lo + hi);
      double fm = eval(mid).F;
      if (fm == 0.0) return mid;
      if (flo * fm < 0.0)
        hi = mid;
      else {
        lo = mid;
        flo = fm;
      }
    }
    return 0.5 * (lo + hi);
  }

  const ProblemParams& params_;
  BoundaryCondition bc_;
  Bands bands_;
  CensusOptions opts_;
  ProblemParams p_;
  double h_;
  std::vector<Interval> pos_;
};

NewtonOptions newton_opts(const CensusOptions& opts) {
  NewtonOptions no;
  no.tol = opts.newton_tol;
  no.h = opts.h;
  no.interior_tol = opts.interior_tol;
  return no;
}

// Collect interior solutions from a scalar scan, deduplicated. Roots are
// polished through the segment corrector seeded with their own trajectory:
// that keeps the refinement inside the root's basin even when the one-shot
// flow map is at its conditioning floor (clustered roots hop basins there).
std::vector<SolutionProfile> scan_solutions(const ProblemParams& params,
                                            const BoundaryCondition& bc, const Bands& bands,
                                            const CensusOptions& opts) {
  ScalarScanner scanner(params, bc, bands, opts);
  std::vector<double> roots = scanner.run();
  // collapse bisection duplicates of the same root
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) {
                            return std::abs(b - a) <= 1e-13 * (1.0 + std::abs(a));
                          }),
              roots.end());
  NewtonOptions no = newton_opts(opts);
  ProblemParams trunc = params;
  trunc.truncated = true;
  const double P = params.weight->period;
  std::vector<SolutionProfile> out;
  for (double y0 : roots) {
    SolutionProfile prof;
    bool ok = false;
    try {
      IntegrateOptions io;
      io.h = no.h > 0.0 ? no.h : bc.span(P) / 4000.0;
      Trajectory t = bc.kind == BcKind::neumann
                         ? integrate(trunc, bc.x0, bc.x1(P), y0, 0.0, io)
                         : integrate(trunc, bc.x0, bc.x1(P), 0.0, y0, io);
      MsPath path;
      path.nodes = t.x;
      path.u = t.u;
      path.v = t.v;
      prof = solve_multishoot(bc, path, params, no);
      ok = true;
    } catch (const Error&) {
      try {
        prof = newton(bc, {y0}, params, no);
        ok = true;
      } catch (const Error&) {
        // equilibria and non-interior roots are data, not failures
      }
    }
    if (!ok || !prof.interior) continue;
    bool dup = false;
    for (const SolutionProfile& q : out)
      if (profile_distance(prof, q) < opts.distinct_tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(prof));
  }
  return out;
}

void record_hypotheses(CensusReport& rep, const MuStarLedger* ledger,
                       const ProblemParams& params) {
  if (!ledger) return;
  rep.lambda_star = ledger->lambda_star_rho;
  rep.mu_star_val = ledger->mu_star;
  rep.hyp_lambda = params.lambda > ledger->lambda_star_rho;
  rep.hyp_mu = params.mu > ledger->mu_star;
}

}  // namespace

CensusReport run_census(const ProblemParams& params, const BoundaryCondition& bc,
                        const Bands& bands, const CensusOptions& opts,
                        const MuStarLedger* ledger) {
  params.validate();
  bc.validate();
  const NodalDecomposition& d = *params.decomp;
  const int m = d.m;
  CensusReport rep;
  rep.theorem_count = static_cast<long long>(std::pow(3.0, m)) - 1;
  record_hypotheses(rep, ledger, params);

  for (const SymbolString& s : all_nonzero_strings(m)) {
    CensusEntry e;
    e.target = s;
    rep.entries.push_back(e);
  }

  std::vector<SolutionProfile> found;
  if (bc.kind != BcKind::periodic) {
    found = scan_solutions(params, bc, bands, opts);
  }

  auto try_assign = [&](SolutionProfile&& prof) {
    std::vector<int> code;
    try {
      code = classify(prof, bands, true);
    } catch (const Error&) {
      return false;  // unclassifiable: margin rule
    }
    std::string key;
    for (int v : code) key += static_cast<char>('0' + v);
    for (CensusEntry& e : rep.entries) {
      if (e.target.str() != key) continue;
      if (e.profile) {
        if (profile_distance(*e.profile, prof) > opts.distinct_tol)
          e.note = "multiple distinct solutions classify to this string";
        return false;
      }
      prof.symbols = code;
      e.profile = std::move(prof);
      return true;
    }
    return false;
  };

  for (SolutionProfile& prof : found) try_assign(std::move(prof));

  // targeted work for strings the scan did not populate: the segment
  // corrector from a synthesized band path first (scalar shooting cannot
  // resolve windows hidden behind a large hump), then scalar seeds
  NewtonOptions no = newton_opts(opts);
  for (CensusEntry& e : rep.entries) {
    if (e.profile) continue;
    for (int attempt = 0; attempt < std::max(2, opts.seed_budget / 4) && !e.profile; ++attempt) {
      ++e.attempts;
      Bands jittered = bands;
      jittered.r = std::min(bands.r * (1.0 + 0.15 * attempt), 0.9 * bands.rho);
      try {
        MsPath path = synth_band_path(bc, params, jittered, e.target.symbols);
        SolutionProfile prof = solve_multishoot(bc, path, params, no);
        if (prof.interior) try_assign(std::move(prof));
      } catch (const Error&) {
      }
    }
    if (!e.profile && bc.kind != BcKind::periodic) {
      for (const std::vector<double>& seed :
           multi_start_seeds(e.target.symbols, bc, params, bands, opts.seed_budget)) {
        ++e.attempts;
        try {
          SolutionProfile prof = newton(bc, seed, params, no);
          if (prof.interior && try_assign(std::move(prof))) break;
        } catch (const Error&) {
        }
      }
    }
  }

  // duplicate check: no two entries may hold the same solution
  for (size_t i = 0; i < rep.entries.size(); ++i)
    for (size_t j = i + 1; j < rep.entries.size(); ++j)
      if (rep.entries[i].profile && rep.entries[j].profile &&
          profile_distance(*rep.entries[i].profile, *rep.entries[j].profile) <
              opts.distinct_tol)
        rep.duplicates.push_back(rep.entries[i].target.str() + "==" +
                                 rep.entries[j].target.str());

  for (CensusEntry& e : rep.entries)
    if (e.profile)
      ++rep.found;
    else
      ++rep.missing;
  return rep;
}

std::pair<SolutionProfile, SolutionProfile> run_two_solutions(const ProblemParams& params,
                                                              const BoundaryCondition& bc,
                                                              double rho,
                                                              const CensusOptions& opts) {
  params.validate();
  if (!(rho > 0.0 && rho < 1.0)) fail(Errc::validation, "run_two_solutions: rho in (0,1)");
  Bands bands{0.5 * rho, rho, 0.5 * (1.0 + rho)};
  std::optional<SolutionProfile> small, large;
  if (bc.kind != BcKind::periodic) {
    for (SolutionProfile& prof : scan_solutions(params, bc, bands, opts)) {
      double sup = prof.traj.max_u();
      if (sup > 0.0 && sup < rho && !small) small = std::move(prof);
      else if (sup > rho && sup < 1.0 && !large) large = std::move(prof);
      if (small && large) break;
    }
  } else {
    NewtonOptions no = newton_opts(opts);
    for (int si : {1, 2}) {
      std::vector<int> target(params.decomp->m, si);
      for (const std::vector<double>& seed :
           multi_start_seeds(target, bc, params, bands, opts.seed_budget)) {
        try {
          SolutionProfile prof = newton(bc, seed, params, no);
          if (!prof.interior) continue;
          double sup = prof.traj.max_u();
          if (sup < rho && !small) small = std::move(prof);
          else if (sup > rho && !large) large = std::move(prof);
        } catch (const Error&) {
        }
        if (small && large) break;
      }
    }
  }
  if (!small) fail(Errc::box_empty, "small-solution box (0, rho) stayed empty");
  if (!large) fail(Errc::box_empty, "large-solution box (rho, 1) stayed empty");
  return {std::move(*small), std::move(*large)};
}

namespace {

bool minimal_period_label(const SolutionProfile& prof, int k, double P, double tol) {
  // order-k subharmonic iff u(.) and u(. + l P) differ for every l = 1..k-1
  for (int l = 1; l < k; ++l) {
    double dist = 0.0;
    double span = prof.traj.x1() - prof.traj.x0();
    for (size_t i = 0; i < prof.traj.x.size(); ++i) {
      double xs = prof.traj.x[i] + l * P;
      while (xs > prof.traj.x1()) xs -= span;
      dist = std::max(dist, std::abs(prof.traj.u[i] - prof.traj.u_at(xs)));
    }
    if (dist <= tol) return false;
  }
  return true;
}

}  // namespace

CensusReport subharmonic_census(const ProblemParams& params, int k, const Bands& bands,
                                const CensusOptions& opts, const MuStarLedger* ledger) {
  params.validate();
  if (k < 2) fail(Errc::validation, "subharmonic census needs k >= 2");
  const int m = params.decomp->m;
  BoundaryCondition bc;
  bc.kind = BcKind::periodic;
  bc.k = k;

  CensusReport rep;
  rep.theorem_count = static_cast<long long>(witt(m, k).value);
  record_hypotheses(rep, ledger, params);
  NewtonOptions no = newton_opts(opts);

  for (const SymbolString& target : subharmonic_targets(m, k)) {
    CensusEntry e;
    e.target = target;
    for (int attempt = 0; attempt < std::max(1, opts.seed_budget / 6) && !e.profile; ++attempt) {
      ++e.attempts;
      Bands jittered = bands;
      jittered.r = bands.r * (1.0 + 0.2 * attempt);
      try {
        MsPath path = synth_band_path(bc, params, jittered, target.symbols);
        SolutionProfile prof = solve_multishoot(bc, path, params, no);
        if (!prof.interior) continue;
        std::vector<int> code = classify(prof, bands, true);
        if (code == target.symbols) {
          prof.symbols = code;
          e.minimal_period =
              minimal_period_label(prof, k, params.weight->period, opts.distinct_tol);
          e.profile = std::move(prof);
        }
      } catch (const Error&) {
      }
    }
    rep.entries.push_back(std::move(e));
  }

  for (CensusEntry& e : rep.entries)
    if (e.profile)
      ++rep.found;
    else
      ++rep.missing;
  return rep;
}

ChaosResult chaos_approx(const ProblemParams& params, const Bands& bands,
                         const std::vector<int>& window, int n, const CensusOptions& opts) {
  params.validate();
  const int m = params.decomp->m;
  if (window.empty() || std::all_of(window.begin(), window.end(), [](int s) { return s == 0; }))
    fail(Errc::validation, "chaos window must be nonzero");
  if (static_cast<int>(window.size()) % m != 0)
    fail(Errc::validation, "chaos window length must be a multiple of m");
  int w_blocks = static_cast<int>(window.size()) / m;
  if (w_blocks > 2 * n + 1)
    fail(Errc::validation, "window does not fit in 2n+1 periods");

  // zero-padded (2n+1)m-periodic string, window centred on block n
  std::vector<int> symbols((2 * n + 1) * m, 0);
  int start_block = n - w_blocks / 2;
  for (int i = 0; i < static_cast<int>(window.size()); ++i)
    symbols[start_block * m + i] = window[i];

  BoundaryCondition bc;
  bc.kind = BcKind::periodic;
  bc.k = 2 * n + 1;
  bc.x0 = -n * params.weight->period;

  NewtonOptions no;
  no.tol = opts.newton_tol;
  no.h = opts.h;
  no.interior_tol = opts.interior_tol;

  MsPath path = synth_band_path(bc, params, bands, symbols);
  SolutionProfile prof = solve_multishoot(bc, path, params, no);
  prof.symbols = classify(prof, bands, false);

  ChaosResult res;
  res.central_maxima.resize(m);
  std::vector<Interval> pos = positivity_intervals(*params.decomp, bc.x0,
                                                   bc.x0 + bc.span(params.weight->period));
  for (int i = 0; i < m; ++i) res.central_maxima[i] = prof.band_maxima[n * m + i];
  res.profile = std::move(prof);
  return res;
}

}  // namespace cline
