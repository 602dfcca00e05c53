#include "cline/weight.hpp"

#include <algorithm>
#include <cmath>

#include "cline/errors.hpp"
#include "cline/numerics.hpp"

namespace cline {

const char* bc_profile_name(BcProfile p) {
  switch (p) {
    case BcProfile::periodic: return "periodic";
    case BcProfile::dirichlet: return "dirichlet";
    case BcProfile::neumann: return "neumann";
  }
  return "?";
}

BcProfile bc_profile_from_string(const std::string& s) {
  if (s == "periodic") return BcProfile::periodic;
  if (s == "dirichlet") return BcProfile::dirichlet;
  if (s == "neumann") return BcProfile::neumann;
  fail(Errc::validation, "unknown bc profile '" + s + "'");
}

double WeightPiece::eval(double x) const {
  if (!tabulated()) return expr(x);
  // linear interpolation, clamped at the table ends
  if (x <= table.front().first) return table.front().second;
  if (x >= table.back().first) return table.back().second;
  auto it = std::upper_bound(table.begin(), table.end(), x,
                             [](double v, const std::pair<double, double>& p) { return v < p.first; });
  auto lo = *(it - 1);
  auto hi = *it;
  double t = (x - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

void WeightSpec::validate() const {
  if (!(period > 0.0)) fail(Errc::validation, "weight.period must be positive");
  if (pieces.empty()) fail(Errc::validation, "weight needs at least one piece");
  double x = 0.0;
  for (size_t i = 0; i < pieces.size(); ++i) {
    const WeightPiece& p = pieces[i];
    if (std::abs(p.x0 - x) > 1e-12 * (1.0 + period))
      fail(Errc::validation, "weight pieces must tile [0,P]: gap before piece " + std::to_string(i));
    if (!(p.x1 > p.x0))
      fail(Errc::validation, "weight piece " + std::to_string(i) + " has non-positive length");
    if (p.tabulated() && p.table.size() < 2)
      fail(Errc::validation, "tabulated weight piece needs at least two samples");
    if (!p.tabulated() && p.expr.empty())
      fail(Errc::validation, "weight piece " + std::to_string(i) + " has no expression");
    x = p.x1;
  }
  if (std::abs(x - period) > 1e-12 * (1.0 + period))
    fail(Errc::validation, "weight pieces do not reach x = P");
}

double WeightSpec::eval(double x) const {
  // boundary points are assigned to the piece on their left (except x = 0)
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (x <= pieces[i].x1 || i + 1 == pieces.size()) return pieces[i].eval(x);
  }
  return pieces.back().eval(x);
}

double WeightSpec::wrap(double x) const {
  double y = x - period * std::floor(x / period);
  if (y < 0.0) y += period;
  if (y >= period) y -= period;
  return y;
}

double WeightSpec::eval_periodic(double x) const { return eval(wrap(x)); }

Interval NodalDecomposition::neg(int i) const {
  if (i == -1) {
    if (leading_neg) return {0.0, sigma[0]};
    if (cyclic) {
      Interval last = neg(m - 1);
      return {last.lo - period, last.hi - period};
    }
    return {0.0, 0.0};
  }
  return {tau[i], sigma[i + 1]};
}

bool NodalDecomposition::has_neg(int i) const {
  if (cyclic) return true;
  if (i == -1) return leading_neg;
  if (i < -1 || i >= m) return false;
  return !neg(i).empty();
}

int NodalDecomposition::wrap_index(int i) const {
  int r = i % m;
  return r < 0 ? r + m : r;
}

namespace {

struct SignedInterval {
  double lo, hi;
  int sign;  // +1, -1, or 0 for an identically-zero plateau
};

// Sign of the weight on (lo,hi) decided by integrating its parts; values
// below `floor` on both sides count as a zero plateau.
int interval_sign(const WeightSpec& spec, double lo, double hi, double floor) {
  double p = integrate_weight_pos(spec, lo, hi, 1e-8);
  double n = integrate_weight_neg(spec, lo, hi, 1e-8);
  if (p <= floor && n <= floor) return 0;
  return p >= n ? +1 : -1;
}

}  // namespace

NodalDecomposition decompose(const WeightSpec& spec, double sign_tol) {
  spec.validate();
  if (!(sign_tol > 0.0)) fail(Errc::validation, "sign_tol must be positive");
  const int kScan = 1024;

  // 1. locate sign-change abscissas piece by piece
  std::vector<double> cuts{0.0};
  for (const WeightPiece& piece : spec.pieces) {
    double len = piece.x1 - piece.x0;
    double prev_x = piece.x0;
    double prev_v = piece.eval(piece.x0);
    for (int k = 1; k <= kScan; ++k) {
      double x = piece.x0 + len * k / kScan;
      double v = piece.eval(x);
      if (prev_v != 0.0 && v != 0.0 && (prev_v > 0) != (v > 0)) {
        double root = bisect([&](double t) { return piece.eval(t); }, prev_x, x, sign_tol);
        cuts.push_back(root);
      } else if (prev_v == 0.0 && v != 0.0 && prev_x != piece.x0) {
        cuts.push_back(prev_x);
      }
      prev_x = x;
      prev_v = v;
    }
    cuts.push_back(piece.x1);
  }
  cuts.push_back(spec.period);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double a, double b) { return std::abs(a - b) < 4 * sign_tol; }),
             cuts.end());
  if (cuts.back() < spec.period) cuts.push_back(spec.period);

  // 2. sign per elementary interval, via signed quadrature
  double scale = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    scale = std::max(scale, std::abs(integrate_weight(spec, cuts[i], cuts[i + 1], 1e-8)));
  if (scale == 0.0) fail(Errc::no_sign_change, "weight vanishes identically");
  double floor = 1e-9 * scale;

  std::vector<SignedInterval> raw;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    int s = interval_sign(spec, cuts[i], cuts[i + 1], floor);
    raw.push_back({cuts[i], cuts[i + 1], s});
  }

  // 3. zero plateaus join the sign interval they touch first (on their left,
  //    or the following one at the very start); record the convention.
  std::vector<Interval> plateaus;
  std::vector<SignedInterval> merged;
  for (const SignedInterval& si : raw) {
    if (si.sign == 0 && !merged.empty()) {
      plateaus.push_back({si.lo, si.hi});
      merged.back().hi = si.hi;
      continue;
    }
    if (si.sign == 0) {
      plateaus.push_back({si.lo, si.hi});
      merged.push_back(si);  // sign fixed by the successor below
      continue;
    }
    if (!merged.empty() && merged.back().sign == si.sign) {
      merged.back().hi = si.hi;
    } else if (!merged.empty() && merged.back().sign == 0) {
      merged.back().sign = si.sign;
      merged.back().hi = si.hi;
    } else {
      merged.push_back(si);
    }
  }
  if (merged.size() == 1)
    fail(Errc::no_sign_change, "weight never changes sign on [0,P]");

  // 4. arrange per profile
  NodalDecomposition d;
  d.period = spec.period;
  d.bc_profile = spec.bc_profile;
  d.cyclic = spec.bc_profile == BcProfile::periodic;
  d.zero_plateaus = std::move(plateaus);

  size_t first = 0;
  if (merged.front().sign < 0) {
    if (d.cyclic)
      fail(Errc::non_alternating,
           "periodic profile must start with a positivity interval at x = 0 "
           "(shift the weight so that 0 lies in I_1^+)");
    if (spec.bc_profile == BcProfile::dirichlet || spec.bc_profile == BcProfile::neumann) {
      d.leading_neg = true;
      first = 1;
    }
    if (merged.size() < 2) fail(Errc::no_sign_change, "weight never becomes positive");
  }
  bool has_negativity = d.leading_neg;
  for (size_t i = first; i < merged.size(); ++i) {
    int expected = (i - first) % 2 == 0 ? +1 : -1;
    if (merged[i].sign != expected)
      fail(Errc::non_alternating, "sign pattern cannot be arranged per the declared profile");
    if (expected > 0) {
      d.sigma.push_back(merged[i].lo);
      d.tau.push_back(merged[i].hi);
    } else {
      has_negativity = true;
    }
  }
  d.m = static_cast<int>(d.tau.size());
  if (d.m == 0) fail(Errc::no_sign_change, "no positivity interval detected");
  if (merged.back().sign > 0) {
    // trailing positivity: I_m^- is empty, only allowed for Dirichlet/Neumann
    if (d.cyclic)
      fail(Errc::non_alternating,
           "periodic profile must end with a negativity interval at x = P");
    if (!has_negativity)
      fail(Errc::non_alternating, "profile needs at least one negativity interval");
    d.sigma.push_back(d.tau.back());
  } else {
    d.sigma.push_back(spec.period);
  }
  return d;
}

namespace {

// Integrates f over [lo,hi] splitting at weight piece boundaries.
double integrate_split(const WeightSpec& spec, double lo, double hi, double rel_tol,
                       const std::function<double(const WeightPiece&, double)>& f) {
  if (hi <= lo) return 0.0;
  double total = 0.0;
  for (const WeightPiece& p : spec.pieces) {
    double a = std::max(lo, p.x0), b = std::min(hi, p.x1);
    if (b <= a) continue;
    total += integrate_adaptive([&](double x) { return f(p, x); }, a, b, rel_tol);
  }
  return total;
}

}  // namespace

double integrate_weight(const WeightSpec& spec, double lo, double hi, double rel_tol) {
  return integrate_split(spec, lo, hi, rel_tol,
                         [](const WeightPiece& p, double x) { return p.eval(x); });
}

double integrate_weight_pos(const WeightSpec& spec, double lo, double hi, double rel_tol) {
  return integrate_split(spec, lo, hi, rel_tol,
                         [](const WeightPiece& p, double x) { return std::max(p.eval(x), 0.0); });
}

double integrate_weight_neg(const WeightSpec& spec, double lo, double hi, double rel_tol) {
  return integrate_split(spec, lo, hi, rel_tol,
                         [](const WeightPiece& p, double x) { return std::max(-p.eval(x), 0.0); });
}

WeightQuadratures quadratures(const WeightSpec& spec, const NodalDecomposition& decomp,
                              double quad_tol) {
  if (!(quad_tol > 0.0)) fail(Errc::validation, "quad_tol must be positive");
  WeightQuadratures q;
  q.a_plus_L1 = integrate_weight_pos(spec, 0.0, spec.period, quad_tol);
  q.a_minus_L1 = integrate_weight_neg(spec, 0.0, spec.period, quad_tol);
  for (int i = 0; i < decomp.m; ++i) {
    Interval ip = decomp.pos(i);
    q.pos_L1.push_back(integrate_weight_pos(spec, ip.lo, ip.hi, quad_tol));
    q.pos_sign_defect.push_back(integrate_weight_neg(spec, ip.lo, ip.hi, quad_tol));
    Interval in = decomp.neg(i);
    if (in.empty()) {
      q.neg_L1.push_back(0.0);
      q.neg_sign_defect.push_back(0.0);
      q.A_r_L1.push_back(0.0);
      q.A_l_L1.push_back(0.0);
      continue;
    }
    q.neg_L1.push_back(integrate_weight_neg(spec, in.lo, in.hi, quad_tol));
    q.neg_sign_defect.push_back(integrate_weight_pos(spec, in.lo, in.hi, quad_tol));
    // ||A_i^r||_L1 = int a^-(xi) (sigma_{i+1} - xi) dxi  (Fubini), and
    // ||A_i^l||_L1 = int a^-(xi) (xi - tau_i) dxi.
    double ar = 0.0, al = 0.0;
    for (const WeightPiece& p : spec.pieces) {
      double a = std::max(in.lo, p.x0), b = std::min(in.hi, p.x1);
      if (b <= a) continue;
      ar += integrate_adaptive(
          [&](double x) { return std::max(-p.eval(x), 0.0) * (in.hi - x); }, a, b, quad_tol);
      al += integrate_adaptive(
          [&](double x) { return std::max(-p.eval(x), 0.0) * (x - in.lo); }, a, b, quad_tol);
    }
    q.A_r_L1.push_back(ar);
    q.A_l_L1.push_back(al);
  }
  if (decomp.leading_neg) {
    Interval i0 = decomp.neg(-1);
    q.leading_neg_L1 = integrate_weight_neg(spec, i0.lo, i0.hi, quad_tol);
  }
  return q;
}

double mu_sharp(const NodalDecomposition&, const WeightQuadratures& quad, double lambda) {
  if (!(lambda > 0.0)) fail(Errc::validation, "mu_sharp: lambda must be positive");
  if (quad.a_minus_L1 <= 0.0)
    fail(Errc::zero_negative_part, "mu_sharp: the weight has no negative part");
  return lambda * quad.a_plus_L1 / quad.a_minus_L1;
}

}  // namespace cline
