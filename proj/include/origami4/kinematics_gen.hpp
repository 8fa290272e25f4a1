#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "origami4/closure.hpp"
#include "origami4/vertex.hpp"

namespace origami4
{

// Relations between folding angles of an arbitrary degree-4 vertex.
//
// Opposite creases i and i+2 (our labels, crease i between sectors i and i+1),
// with T = t_{i+2}^2:
//   t_i^2 = [-(1+T) cos(a_i + a_{i+1}) + T cos(a_{i+2} - a_{i+3}) + cos(a_{i+2} + a_{i+3})]
//         / [ (1+T) cos(a_i - a_{i+1}) - T cos(a_{i+2} - a_{i+3}) - cos(a_{i+2} + a_{i+3})]
//
// Adjacent creases i and i+1:
//   cos a_{i+3} (1+t_i^2)(1+t_{i+1}^2) = cos(a_{i+2} - a_{i+1} - a_i) t_{i+1}^2
//       + cos(a_{i+2} + a_{i+1} - a_i) t_i^2 + cos(a_{i+2} - a_{i+1} + a_i) t_i^2 t_{i+1}^2
//       + cos(a_{i+2} + a_{i+1} + a_i) + 4 sin a_{i+2} sin a_i t_i t_{i+1}
// The `printed` form puts t_{i+1}^2 on the second term instead of t_i^2.
//
// Both are also evaluated multiplied through by cos^2 of the half angles, which
// keeps every coefficient finite at rho = +-pi.

enum class AdjacentForm
{
  corrected,
  printed
};

enum class OppositeStatus
{
  finite,
  infinite,
  no_real_solution,
  degenerate
};

struct OppositeResult
{
  OppositeStatus status = OppositeStatus::finite;
  double t_squared = 0.0;

  bool ok() const { return status == OppositeStatus::finite || status == OppositeStatus::infinite; }

  double value() const
  {
    if (status == OppositeStatus::no_real_solution)
    {
      throw RangeError("no real solution at this driver: opposite ratio is negative");
    }
    if (status == OppositeStatus::degenerate)
    {
      throw DegenerateError("degenerate configuration: opposite ratio is 0/0");
    }
    return t_squared;
  }
};

struct OppositeMagnitude
{
  OppositeStatus status = OppositeStatus::finite;
  double magnitude = 0.0; // |rho_i| in [0, pi]
};

namespace detail
{

inline constexpr double kRelationZero = 1e-14;

/// Sector-angle identities that fail only by rounding are taken as exact.
inline constexpr double kIdentitySnap = 1e-14;

inline void check_index(int i, const char* what)
{
  if (i < 1 || i > 4)
  {
    std::ostringstream os;
    os << what << " must be in 1..4 (got " << i << ")";
    throw InputError(os.str());
  }
}

inline double snap(double x)
{
  return std::abs(x) <= kIdentitySnap ? 0.0 : x;
}

/// The opposite ratio with c = cos^2(rho_opp/2), s = sin^2(rho_opp/2). Every coefficient is a
/// difference of cosines taken as a product, so a flat excess or alternating sum that is zero
/// makes its term exactly zero.
struct RatioTerms
{
  double num;
  double den;
  double num_scale;
  double den_scale;
};

inline RatioTerms opposite_nd(const Vertex4& v, int i, double c, double s)
{
  const double a0 = v.alpha(i);
  const double a1 = v.alpha(i + 1);
  const double a2 = v.alpha(i + 2);
  const double a3 = v.alpha(i + 3);
  const double excess = snap(a0 + a1 + a2 + a3 - 2.0 * kPi);
  const double alt = snap(a0 - a1 + a2 - a3);
  // cos(a2 - a3) - cos(a0 + a1) and cos(a2 + a3) - cos(a0 + a1)
  const double ns = -2.0 * std::sin((a0 + a1 + a2 - a3) / 2.0) * std::sin((a2 - a3 - a0 - a1) / 2.0);
  const double nc = 2.0 * std::sin(excess / 2.0) * std::sin((a2 + a3 - a0 - a1) / 2.0);
  // cos(a0 - a1) - cos(a2 - a3) and cos(a0 - a1) - cos(a2 + a3)
  const double ds = -2.0 * std::sin(alt / 2.0) * std::sin((a0 - a1 - a2 + a3) / 2.0);
  const double dc = -2.0 * std::sin((a0 - a1 + a2 + a3) / 2.0) * std::sin((a0 - a1 - a2 - a3) / 2.0);
  return {s * ns + c * nc, s * ds + c * dc, std::abs(s * ns) + std::abs(c * nc), std::abs(s * ds) + std::abs(c * dc)};
}

inline OppositeStatus classify_ratio(const RatioTerms& r)
{
  const bool nz = std::abs(r.num) <= kRelationZero * r.num_scale;
  const bool dz = std::abs(r.den) <= kRelationZero * r.den_scale;
  if (nz && dz)
  {
    return OppositeStatus::degenerate;
  }
  if (dz)
  {
    return OppositeStatus::infinite;
  }
  if (nz)
  {
    return OppositeStatus::finite;
  }
  return (r.num > 0.0) == (r.den > 0.0) ? OppositeStatus::finite : OppositeStatus::no_real_solution;
}

/// Adjacent relation  ci cn g + ci sn a + si cn b + si sn e - h sin(rho_i) sin(rho_{i+1}) = 0
/// with ci, si = cos^2, sin^2 of rho_i/2 and cn, sn likewise for rho_{i+1}.
struct AdjacentTerms
{
  double g;
  double a;
  double b;
  double e;
  double h;
};

inline AdjacentTerms adjacent_terms(const Vertex4& v, int i, AdjacentForm form)
{
  const double a0 = v.alpha(i);
  const double a1 = v.alpha(i + 1);
  const double a2 = v.alpha(i + 2);
  const double a3 = v.alpha(i + 3);
  const double excess = snap(a0 + a1 + a2 + a3 - 2.0 * kPi);
  const double alt = snap(a0 - a1 + a2 - a3);
  AdjacentTerms k{};
  // cos a3 minus cos(a2 + a1 + a0), cos(a2 - a1 - a0), cos(a2 + a1 - a0), cos(a2 - a1 + a0)
  k.g = 2.0 * std::sin(excess / 2.0) * std::sin((a3 - a2 - a1 - a0) / 2.0);
  k.a = -2.0 * std::sin((a3 + a2 - a1 - a0) / 2.0) * std::sin((a3 - a2 + a1 + a0) / 2.0);
  k.b = -2.0 * std::sin((a3 + a2 + a1 - a0) / 2.0) * std::sin((a3 - a2 - a1 + a0) / 2.0);
  k.e = 2.0 * std::sin((a3 + a2 - a1 + a0) / 2.0) * std::sin(alt / 2.0);
  k.h = std::sin(a2) * std::sin(a0);
  if (form == AdjacentForm::printed)
  {
    k.a -= std::cos(a2 + a1 - a0);
    k.b = std::cos(a3);
  }
  return k;
}

} // namespace detail

/// t_i^2 from t_{i+2} = t_opp (t_opp may be infinite).
inline OppositeResult opposite_t_squared(const Vertex4& v, int i, double t_opp)
{
  detail::check_index(i, "crease index");
  if (std::isnan(t_opp))
  {
    throw InputError("t_opp must not be NaN");
  }
  double c = 0.0;
  double s = 1.0;
  if (!std::isinf(t_opp))
  {
    const double tt = t_opp * t_opp;
    c = 1.0 / (1.0 + tt);
    s = tt / (1.0 + tt);
  }
  const detail::RatioTerms r = detail::opposite_nd(v, i, c, s);
  OppositeResult out;
  out.status = detail::classify_ratio(r);
  switch (out.status)
  {
    case OppositeStatus::infinite:
      out.t_squared = INFINITY;
      break;
    case OppositeStatus::finite:
      out.t_squared = std::abs(r.num) <= detail::kRelationZero * r.num_scale ? 0.0 : r.num / r.den;
      break;
    default:
      out.t_squared = NAN;
  }
  return out;
}

/// |rho_i| from rho_{i+2}, finite at every input angle.
inline OppositeMagnitude opposite_fold_magnitude(const Vertex4& v, int i, double rho_opp)
{
  const double c = std::cos(rho_opp / 2.0) * std::cos(rho_opp / 2.0);
  const double s = std::sin(rho_opp / 2.0) * std::sin(rho_opp / 2.0);
  const detail::RatioTerms r = detail::opposite_nd(v, i, c, s);
  OppositeMagnitude out;
  out.status = detail::classify_ratio(r);
  switch (out.status)
  {
    case OppositeStatus::infinite:
      out.magnitude = kPi;
      break;
    case OppositeStatus::finite:
      out.magnitude = std::abs(r.num) <= detail::kRelationZero * r.num_scale
                          ? 0.0
                          : 2.0 * std::atan2(std::sqrt(std::abs(r.num)), std::sqrt(std::abs(r.den)));
      break;
    default:
      out.magnitude = NAN;
  }
  return out;
}

/// LHS - RHS of the adjacent relation in half-angle tangents.
inline double adjacent_residual(const Vertex4& v, int i, double t_i, double t_next, AdjacentForm form = AdjacentForm::corrected)
{
  detail::check_index(i, "crease index");
  if (!std::isfinite(t_i) || !std::isfinite(t_next))
  {
    throw InputError("adjacent_residual needs finite half-angle tangents");
  }
  const double a0 = v.alpha(i);
  const double a1 = v.alpha(i + 1);
  const double a2 = v.alpha(i + 2);
  const double a3 = v.alpha(i + 3);
  const double ti2 = t_i * t_i;
  const double tn2 = t_next * t_next;
  const double lhs = std::cos(a3) * (1.0 + ti2) * (1.0 + tn2);
  const double second = form == AdjacentForm::corrected ? ti2 : tn2;
  const double rhs = std::cos(a2 - a1 - a0) * tn2 + std::cos(a2 + a1 - a0) * second +
                     std::cos(a2 - a1 + a0) * ti2 * tn2 + std::cos(a2 + a1 + a0) +
                     4.0 * std::sin(a2) * std::sin(a0) * t_i * t_next;
  return lhs - rhs;
}

/// Adjacent relation scaled by cos^2(rho_i/2) cos^2(rho_{i+1}/2); finite everywhere.
inline double adjacent_residual_angles(const Vertex4& v, int i, double rho_i, double rho_next, AdjacentForm form = AdjacentForm::corrected)
{
  detail::check_index(i, "crease index");
  const detail::AdjacentTerms k = detail::adjacent_terms(v, i, form);
  const double ci = std::cos(rho_i / 2.0) * std::cos(rho_i / 2.0);
  const double si = std::sin(rho_i / 2.0) * std::sin(rho_i / 2.0);
  const double cn = std::cos(rho_next / 2.0) * std::cos(rho_next / 2.0);
  const double sn = std::sin(rho_next / 2.0) * std::sin(rho_next / 2.0);
  return ci * cn * k.g + ci * sn * k.a + si * cn * k.b + si * sn * k.e - k.h * std::sin(rho_i) * std::sin(rho_next);
}

struct AdjacentRoots
{
  std::vector<double> roots; // rho_{i+1} values, wrapped
  bool degenerate = false;   // relation holds for every rho_{i+1}
};

/// Values of rho_{i+1} satisfying the adjacent relation with rho_i.
inline AdjacentRoots adjacent_roots(const Vertex4& v, int i, double rho_i, AdjacentForm form = AdjacentForm::corrected)
{
  detail::check_index(i, "crease index");
  const detail::AdjacentTerms k = detail::adjacent_terms(v, i, form);
  const double ci = std::cos(rho_i / 2.0) * std::cos(rho_i / 2.0);
  const double si = std::sin(rho_i / 2.0) * std::sin(rho_i / 2.0);
  // qa u^2 + qb u + qc = 0 in u = tan(rho_{i+1}/2); u may be infinite
  double qa = ci * k.a + si * k.e;
  const double qb = -2.0 * k.h * std::sin(rho_i);
  double qc = ci * k.g + si * k.b;
  if (std::abs(qa) <= detail::kRelationZero * (std::abs(ci * k.a) + std::abs(si * k.e)))
  {
    qa = 0.0;
  }
  if (std::abs(qc) <= detail::kRelationZero * (std::abs(ci * k.g) + std::abs(si * k.b)))
  {
    qc = 0.0;
  }
  AdjacentRoots out;
  if (qa == 0.0 && qb == 0.0 && qc == 0.0)
  {
    out.degenerate = true;
    return out;
  }
  double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0)
  {
    if (disc < -1e-12 * (qb * qb + 4.0 * std::abs(qa * qc)))
    {
      return out;
    }
    disc = 0.0;
  }
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  // the roots are q / qa and qc / q
  for (const auto& [num, den] : {std::pair{q, qa}, std::pair{qc, q}})
  {
    if (num == 0.0 && den == 0.0)
    {
      continue;
    }
    const double rho = wrap_angle(2.0 * std::atan2(num, den));
    if (out.roots.empty() || out.roots.front() != rho)
    {
      out.roots.push_back(rho);
    }
  }
  return out;
}

/// Signs of the two opposite-crease products: (rho1 rho3, rho2 rho4).
struct BranchLabel
{
  int opposite_sign_1 = 1;
  int opposite_sign_2 = 1;

  std::string str() const
  {
    return {opposite_sign_1 > 0 ? '+' : '-', opposite_sign_2 > 0 ? '+' : '-'};
  }

  static BranchLabel parse(const std::string& s)
  {
    if (s.size() != 2 || (s[0] != '+' && s[0] != '-') || (s[1] != '+' && s[1] != '-'))
    {
      throw InputError("branch label must be two sign characters, e.g. \"+-\"");
    }
    return {s[0] == '+' ? 1 : -1, s[1] == '+' ? 1 : -1};
  }

  static std::array<BranchLabel, 4> all() { return {{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}}; }

  bool operator==(const BranchLabel& o) const = default;
};

namespace detail
{

inline constexpr double kSignEps = 1e-9;

/// Sign of a folding angle, or 0 when it sits at 0 or +-pi where the sign is not meaningful.
inline int fold_sign(double rho)
{
  if (std::abs(rho) < kSignEps || std::abs(rho) > kPi - kSignEps)
  {
    return 0;
  }
  return rho > 0.0 ? 1 : -1;
}

inline bool pair_matches(int wanted, double a, double b)
{
  const int sa = fold_sign(a);
  const int sb = fold_sign(b);
  return sa == 0 || sb == 0 || sa * sb == wanted;
}

} // namespace detail

inline bool branch_matches(const BranchLabel& b, const FoldState& s)
{
  return detail::pair_matches(b.opposite_sign_1, s.rho(1), s.rho(3)) &&
         detail::pair_matches(b.opposite_sign_2, s.rho(2), s.rho(4));
}

/// Label of a state; ambiguous pairs report +.
inline BranchLabel branch_of(const FoldState& s)
{
  auto sign = [](double a, double b)
  {
    const int p = detail::fold_sign(a) * detail::fold_sign(b);
    return p < 0 ? -1 : 1;
  };
  return {sign(s.rho(1), s.rho(3)), sign(s.rho(2), s.rho(4))};
}

/// Every closure-certified state with crease `driver_index` at `driver`, sorted.
inline std::vector<FoldState> candidate_states(const Vertex4& v, int driver_index, double driver, const Tolerances& tol = {})
{
  detail::check_index(driver_index, "driver index");
  if (!std::isfinite(driver) || std::abs(driver) > kPi + 1e-12)
  {
    throw RangeError("driver must lie in [-pi, pi]");
  }
  driver = std::clamp(driver, -kPi, kPi);
  const int d0 = driver_index;
  const int d1 = slot(d0 + 1) + 1;
  const int d2 = slot(d0 + 2) + 1;
  const int d3 = slot(d0 + 3) + 1;

  std::vector<std::array<double, 4>> raw;
  bool degenerate = false;

  const OppositeMagnitude m2 = opposite_fold_magnitude(v, d2, driver);
  if (m2.status == OppositeStatus::no_real_solution)
  {
    return {};
  }
  const AdjacentRoots r1 = adjacent_roots(v, d0, driver);
  degenerate = degenerate || r1.degenerate || m2.status == OppositeStatus::degenerate;

  for (const double x1 : r1.roots)
  {
    std::vector<double> opts2;
    if (m2.status == OppositeStatus::degenerate)
    {
      opts2 = adjacent_roots(v, d1, x1).roots;
    }
    else
    {
      opts2 = {m2.magnitude, -m2.magnitude};
    }
    const OppositeMagnitude m3 = opposite_fold_magnitude(v, d3, x1);
    if (m3.status == OppositeStatus::no_real_solution)
    {
      continue;
    }
    for (const double x2 : opts2)
    {
      std::vector<double> opts3;
      if (m3.status == OppositeStatus::degenerate)
      {
        degenerate = true;
        opts3 = adjacent_roots(v, d2, x2).roots;
      }
      else
      {
        opts3 = {m3.magnitude, -m3.magnitude};
      }
      for (const double x3 : opts3)
      {
        std::array<double, 4> r{};
        r[slot(d0)] = driver;
        r[slot(d1)] = x1;
        r[slot(d2)] = x2;
        r[slot(d3)] = x3;
        raw.push_back(r);
      }
    }
  }

  std::vector<FoldState> out;
  auto push_unique = [&](const FoldState& s)
  {
    for (const FoldState& o : out)
    {
      if (state_distance(o, s) < 1e-9)
      {
        return;
      }
    }
    out.push_back(s);
  };

  std::vector<FoldState> polished;
  for (const auto& r : raw)
  {
    double pre = 0.0;
    for (int i = 1; i <= 4; ++i)
    {
      pre = std::max(pre, std::abs(adjacent_residual_angles(v, i, r[slot(i)], r[slot(i + 1)])));
    }
    if (pre > 1e-4)
    {
      continue;
    }
    const FoldState s(r);
    const double res = closure_residual(v, s);
    if (res < tol.residual_tol)
    {
      push_unique(s);
    }
    else if (res < 1e-4)
    {
      // near a turning point the closed forms lose digits; polish with the oracle
      const ClosureReport rep = oracle_solve(v, d0, driver, s, tol);
      if (rep.converged && state_distance(rep.state, s) < 1e-3)
      {
        polished.push_back(rep.state);
      }
    }
  }
  // closed-form states win over polished copies of themselves
  for (const FoldState& s : polished)
  {
    push_unique(s);
  }

  if (out.empty() && degenerate)
  {
    constexpr int kSeeds = 16;
    for (int a = 0; a < kSeeds; ++a)
    {
      for (int b = 0; b < 4; ++b)
      {
        std::array<double, 4> seed{};
        seed[slot(d0)] = driver;
        seed[slot(d1)] = -kPi + (a + 0.5) * 2.0 * kPi / kSeeds;
        seed[slot(d2)] = (b & 1 ? -1.0 : 1.0) * (std::isfinite(m2.magnitude) ? m2.magnitude : 1.0);
        seed[slot(d3)] = (b & 2 ? -1.0 : 1.0) * 1.0;
        const ClosureReport rep = oracle_solve(v, d0, driver, FoldState(seed), tol);
        if (rep.converged)
        {
          push_unique(rep.state);
        }
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const FoldState& a, const FoldState& b) { return a.rhos() < b.rhos(); });
  return out;
}

namespace detail
{

inline bool same_signs(const FoldState& a, const FoldState& b)
{
  for (int i = 1; i <= 4; ++i)
  {
    if (fold_sign(a.rho(i)) != fold_sign(b.rho(i)))
    {
      return false;
    }
  }
  return true;
}

/// Nearest candidate to `prev`; near-ties go to the one keeping prev's sign vector.
inline const FoldState& nearest(const std::vector<FoldState>& cands, const FoldState& prev)
{
  std::size_t best = 0;
  double best_d = INFINITY;
  for (std::size_t k = 0; k < cands.size(); ++k)
  {
    const double d = state_distance(cands[k], prev);
    if (d < best_d - 1e-12)
    {
      best = k;
      best_d = d;
    }
    else if (std::abs(d - best_d) <= 1e-12 && same_signs(cands[k], prev) && !same_signs(cands[best], prev))
    {
      best = k;
    }
  }
  return cands[best];
}

inline std::vector<FoldState> on_branch(const std::vector<FoldState>& cands, const BranchLabel& b)
{
  std::vector<FoldState> out;
  for (const FoldState& s : cands)
  {
    if (branch_matches(b, s))
    {
      out.push_back(s);
    }
  }
  return out;
}

} // namespace detail

/// The state on `branch` with crease `driver_index` at `driver`.
/// With `near` set, ties between matching states resolve to the closest one.
inline FoldState solve_state(const Vertex4& v,
                             int driver_index,
                             double driver,
                             const BranchLabel& branch,
                             const Tolerances& tol = {},
                             const FoldState* near = nullptr)
{
  const std::vector<FoldState> all = candidate_states(v, driver_index, driver, tol);
  if (all.empty())
  {
    std::ostringstream os;
    os << "driver rho" << driver_index << " = " << driver << " is infeasible: no closed state exists";
    throw RangeError(os.str());
  }
  const std::vector<FoldState> cands = detail::on_branch(all, branch);
  if (cands.empty())
  {
    std::ostringstream os;
    os << "branch " << branch.str() << " is not realizable at rho" << driver_index << " = " << driver;
    throw BranchError(os.str());
  }
  if (near != nullptr)
  {
    return detail::nearest(cands, *near);
  }
  return cands.front();
}

enum class EndCause
{
  flat_folded_crease,
  opposite_negativity,
  closure_infeasibility
};

inline std::string to_string(EndCause c)
{
  switch (c)
  {
    case EndCause::flat_folded_crease:
      return "flat-folded crease";
    case EndCause::opposite_negativity:
      return "opposite-relation negativity";
    case EndCause::closure_infeasibility:
      return "closure infeasibility";
  }
  return "unknown";
}

struct RangeInterval
{
  double lo = 0.0;
  double hi = 0.0;
  EndCause lo_cause = EndCause::flat_folded_crease;
  EndCause hi_cause = EndCause::flat_folded_crease;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct FoldingRange
{
  std::vector<RangeInterval> intervals;
  std::string diagnostic;

  bool empty() const { return intervals.empty(); }
};

struct RangeOptions
{
  int grid = 721; // coarse seeding grid over [-pi, pi]
};

inline constexpr double kMinInterval = 1e-6;

namespace detail
{

inline bool feasible_on(const Vertex4& v, int d, double x, const BranchLabel& b, const Tolerances& tol)
{
  return !on_branch(candidate_states(v, d, x, tol), b).empty();
}

inline EndCause end_cause(const Vertex4& v, int d, double x_in, double x_out, const BranchLabel& b, const Tolerances& tol)
{
  if (std::abs(x_in) >= kPi - 1e-9)
  {
    return EndCause::flat_folded_crease;
  }
  const std::vector<FoldState> at = on_branch(candidate_states(v, d, x_in, tol), b);
  for (const FoldState& s : at)
  {
    for (int i = 1; i <= 4; ++i)
    {
      if (std::abs(s.rho(i)) >= kPi - 1e-5)
      {
        return EndCause::flat_folded_crease;
      }
    }
  }
  const OppositeMagnitude m = opposite_fold_magnitude(v, slot(d + 2) + 1, x_out);
  if (m.status == OppositeStatus::no_real_solution || adjacent_roots(v, d, x_out).roots.empty())
  {
    return EndCause::opposite_negativity;
  }
  return EndCause::closure_infeasibility;
}

inline double bisect_edge(const Vertex4& v, int d, double feasible, double infeasible, const BranchLabel& b, const Tolerances& tol)
{
  while (std::abs(feasible - infeasible) > tol.solver_tol)
  {
    const double mid = 0.5 * (feasible + infeasible);
    if (feasible_on(v, d, mid, b, tol))
    {
      feasible = mid;
    }
    else
    {
      infeasible = mid;
    }
  }
  return feasible;
}

} // namespace detail

/// Maximal driver intervals on which `branch` has a closed state.
inline FoldingRange folding_range(const Vertex4& v,
                                  int driver_index,
                                  const BranchLabel& branch,
                                  const Tolerances& tol = {},
                                  const RangeOptions& opt = {})
{
  detail::check_index(driver_index, "driver index");
  const int n = std::max(opt.grid, 3);
  std::vector<double> xs(n);
  std::vector<char> ok(n);
  for (int k = 0; k < n; ++k)
  {
    xs[k] = k == n - 1 ? kPi : -kPi + 2.0 * kPi * k / (n - 1);
    if (std::abs(xs[k]) < 1e-15)
    {
      xs[k] = 0.0;
    }
    ok[k] = detail::feasible_on(v, driver_index, xs[k], branch, tol) ? 1 : 0;
  }

  FoldingRange out;
  int k = 0;
  while (k < n)
  {
    if (!ok[k])
    {
      ++k;
      continue;
    }
    const int a = k;
    while (k + 1 < n && ok[k + 1])
    {
      ++k;
    }
    const int b = k;
    RangeInterval iv;
    if (a == 0)
    {
      iv.lo = -kPi;
      iv.lo_cause = EndCause::flat_folded_crease;
    }
    else
    {
      iv.lo = detail::bisect_edge(v, driver_index, xs[a], xs[a - 1], branch, tol);
      iv.lo_cause = detail::end_cause(v, driver_index, iv.lo, iv.lo - 1e-7, branch, tol);
    }
    if (b == n - 1)
    {
      iv.hi = kPi;
      iv.hi_cause = EndCause::flat_folded_crease;
    }
    else
    {
      iv.hi = detail::bisect_edge(v, driver_index, xs[b], xs[b + 1], branch, tol);
      iv.hi_cause = detail::end_cause(v, driver_index, iv.hi, iv.hi + 1e-7, branch, tol);
    }
    // -s closes whenever s does and carries the same label at the mirrored driver, so an
    // interval through 0 may join two mirror pieces; they are one curve only if the
    // opposite crease passes through 0 with the driver
    std::vector<RangeInterval> pieces{iv};
    if (iv.lo < 0.0 && iv.hi > 0.0)
    {
      bool continuous = false;
      for (const FoldState& s : detail::on_branch(candidate_states(v, driver_index, 0.0, tol), branch))
      {
        continuous = continuous || std::abs(s.rho(driver_index + 2)) < detail::kSignEps;
      }
      if (!continuous)
      {
        pieces = {{iv.lo, 0.0, iv.lo_cause, EndCause::closure_infeasibility},
                  {0.0, iv.hi, EndCause::closure_infeasibility, iv.hi_cause}};
      }
    }
    // isolated points where every label matches (e.g. the unfolded state) are not branches
    for (const RangeInterval& p : pieces)
    {
      if (p.length() >= kMinInterval)
      {
        out.intervals.push_back(p);
      }
    }
    ++k;
  }
  if (out.intervals.empty())
  {
    std::ostringstream os;
    os << "no feasible seed for branch " << branch.str() << " with driver rho" << driver_index << " on a " << n
       << "-point grid";
    out.diagnostic = os.str();
  }
  return out;
}

struct ConfigCurve
{
  Vertex4 vertex;
  BranchLabel branch;
  int driver_index = 1;
  std::vector<FoldState> samples;
  std::vector<double> residuals;
  bool complete = true;
  std::string diagnostic;
};

/// Follows `branch` through the given monotone driver values by nearest continuation.
/// The first sample is the branch state nearest `seed` when one is given.
inline ConfigCurve trace_curve_at(const Vertex4& v,
                                  int driver_index,
                                  const BranchLabel& branch,
                                  const std::vector<double>& drivers,
                                  const Tolerances& tol = {},
                                  const FoldState* seed = nullptr)
{
  ConfigCurve curve{v, branch, driver_index, {}, {}, true, {}};
  for (const double x : drivers)
  {
    const std::vector<FoldState> cands = detail::on_branch(candidate_states(v, driver_index, x, tol), branch);
    if (cands.empty())
    {
      std::ostringstream os;
      os << "trace aborted at rho" << driver_index << " = " << x << ": branch " << branch.str() << " has no closed state";
      curve.complete = false;
      curve.diagnostic = os.str();
      break;
    }
    const FoldState s = !curve.samples.empty() ? detail::nearest(cands, curve.samples.back())
                        : seed != nullptr      ? detail::nearest(cands, *seed)
                                               : cands.front();
    curve.samples.push_back(s);
    curve.residuals.push_back(closure_residual(v, s));
  }
  return curve;
}

/// Equally spaced driver values covering `iv` with spacing at most trace_step_max.
inline std::vector<double> sweep_drivers(const RangeInterval& iv, int n_samples, const Tolerances& tol = {})
{
  const double len = iv.length();
  int count = std::max(n_samples, 2);
  count = std::max(count, static_cast<int>(std::ceil(len / tol.trace_step_max)) + 1);
  if (len <= 0.0)
  {
    return {iv.lo};
  }
  std::vector<double> xs(count);
  for (int k = 0; k < count; ++k)
  {
    xs[k] = k == count - 1 ? iv.hi : iv.lo + len * k / (count - 1);
    if (std::abs(xs[k]) < 1e-14)
    {
      xs[k] = 0.0;
    }
  }
  return xs;
}

/// Interval traced by default: the one containing 0, else the longest.
inline const RangeInterval& primary_interval(const FoldingRange& r)
{
  if (r.empty())
  {
    throw RangeError(r.diagnostic.empty() ? "empty folding range" : r.diagnostic);
  }
  for (const RangeInterval& iv : r.intervals)
  {
    if (iv.contains(0.0))
    {
      return iv;
    }
  }
  return *std::max_element(r.intervals.begin(), r.intervals.end(),
                           [](const RangeInterval& a, const RangeInterval& b) { return a.length() < b.length(); });
}

inline ConfigCurve trace_curve(const Vertex4& v,
                               int driver_index,
                               const BranchLabel& branch,
                               int n_samples,
                               const Tolerances& tol = {},
                               const RangeOptions& opt = {})
{
  const FoldingRange r = folding_range(v, driver_index, branch, tol, opt);
  return trace_curve_at(v, driver_index, branch, sweep_drivers(primary_interval(r), n_samples, tol), tol);
}

} // namespace origami4
