// Acceptance run: one PASS/FAIL line per criterion, details on the following indented lines.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "origami4/duality.hpp"
#include "origami4/embedding.hpp"
#include "origami4/kinematics_ff.hpp"
#include "origami4/tessellation.hpp"
#include "support/reference.hpp"

using namespace origami4;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome
{
  bool pass = false;
  std::vector<std::string> log;

  template <typename... Args>
  void note(const char* fmt, Args... args)
  {
    if constexpr (sizeof...(Args) == 0)
    {
      log.emplace_back(fmt);
    }
    else
    {
      char buf[512];
      std::snprintf(buf, sizeof buf, fmt, args...);
      log.emplace_back(buf);
    }
  }
};

Vertex4 random_flat_foldable(std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> u(0.2, kPi - 0.2);
  for (;;)
  {
    const double a = u(rng);
    const double b = u(rng);
    // keep clear of the singular mode constants at a = b and a + b = pi
    if (std::abs(a - b) > 0.05 && std::abs(a + b - kPi) > 0.05)
    {
      return Vertex4({a, b, kPi - a, kPi - b});
    }
  }
}

/// Every state that reaches this function is checked twice: by the library residual and
/// by the test-side Rodrigues chain.
struct Audit
{
  long states = 0;
  long failures = 0;
  long exceptions = 0;
  double worst = 0.0;

  void check(const Vertex4& v, const FoldState& s)
  {
    ++states;
    const double r = std::max(closure_residual(v, s), ref::closure_defect(v.alphas(), s.rhos()));
    worst = std::max(worst, r);
    if (!(r < 1e-9))
    {
      ++failures;
    }
  }

  void guard(const std::function<void()>& f)
  {
    try
    {
      f();
    }
    catch (const std::exception&)
    {
      ++exceptions;
    }
  }
};

Outcome duality_theorem()
{
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> u(0.2, kPi - 0.2);
  int elliptic = 0;
  int hyperbolic = 0;
  int no_state = 0;
  int bad = 0;
  long samples = 0;
  double worst_mag = 0.0;
  double worst_pat = 0.0;
  for (int n = 0; n < 100; ++n)
  {
    const Vertex4 v({u(rng), u(rng), u(rng), u(rng)});
    const Curvature c = classify(v).curvature;
    elliptic += c == Curvature::elliptic;
    hyperbolic += c == Curvature::hyperbolic;
    const DualityReport rep = verify_duality(v, 50);
    if (rep.pairs.empty())
    {
      ++no_state;
      continue;
    }
    samples += rep.samples;
    worst_mag = std::max(worst_mag, rep.max_magnitude_mismatch);
    worst_pat = std::max(worst_pat, rep.max_pattern_deviation);
    if (!rep.confirmed(1e-6))
    {
      ++bad;
    }
  }
  const double t = seconds_since(t0);
  o.note("vertices: %d elliptic, %d hyperbolic; %d have no closed state on any branch", elliptic, hyperbolic, no_state);
  o.note("samples compared: %ld; worst |rho| mismatch %.3e; worst sign-pattern deviation %.3e", samples, worst_mag, worst_pat);
  o.note("vertices failing: %d; runtime %.2f s", bad, t);
  o.pass = bad == 0 && elliptic > 0 && hyperbolic > 0 && samples > 0 && worst_mag < 1e-6 && t < 120.0;
  return o;
}

Outcome oracle_certification()
{
  Outcome o;
  Audit a;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.2, kPi - 0.2);
  std::uniform_real_distribution<double> ud(-kPi, kPi);
  for (int n = 0; n < 100; ++n)
  {
    const Vertex4 v({u(rng), u(rng), u(rng), u(rng)});
    for (int d = 1; d <= 4; ++d)
    {
      const double x = ud(rng);
      a.guard([&] {
        for (const FoldState& s : candidate_states(v, d, x))
        {
          a.check(v, s);
        }
      });
    }
    a.guard([&] {
      for (const BranchLabel& b : BranchLabel::all())
      {
        const FoldingRange r = folding_range(v, 1, b);
        if (r.empty())
        {
          continue;
        }
        const ConfigCurve c = trace_curve(v, 1, b, 20);
        for (const FoldState& s : c.samples)
        {
          a.check(v, s);
        }
      }
    });
  }
  for (int n = 0; n < 50; ++n)
  {
    const Vertex4 v = random_flat_foldable(rng);
    a.guard([&] {
      for (int mode = 1; mode <= 2; ++mode)
      {
        for (int k = 0; k <= 20; ++k)
        {
          a.check(v, fold_mode(v, mode, -kPi + 2 * kPi * k / 20));
        }
      }
    });
  }
  const Vertex4 base({kPi / 4, kPi / 2, kPi / 4, kPi / 2});
  for (const double theta : {0.9, 1.2, 1.6, 2.2})
  {
    for (const CombineVariant var : {CombineVariant::parallel, CombineVariant::rotated})
    {
      a.guard([&] {
        const CombinedVertex cv = synchronize(base, var, theta);
        a.check(cv.base, cv.base_state);
        a.check(cv.dual, cv.dual_state);
        if (var == CombineVariant::rotated)
        {
          const auto [v1, v2] = split_combined(cv);
          const auto [s1, s2] = split_states(cv);
          a.check(v1, s1);
          a.check(v2, s2);
        }
      });
    }
  }
  a.guard([&] {
    const SquareTwistSheet s = build_square_twist_sheet(Vertex4({kPi / 4, kPi / 2, 3 * kPi / 4, kPi / 2}), 2, 2);
    for (int k = 0; k <= 10; ++k)
    {
      for (const FoldState& st : fold_sheet(s, kPi * k / 10).vertex_states)
      {
        a.check(s.generator, st);
      }
    }
  });
  o.note("states audited: %ld; worst residual %.3e; over 1e-9: %ld; exceptions: %ld", a.states, a.worst, a.failures, a.exceptions);
  o.pass = a.states > 0 && a.failures == 0 && a.exceptions == 0;
  return o;
}

Outcome theorem_one_reduction()
{
  Outcome o;
  std::mt19937_64 rng(42);
  long samples = 0;
  double worst = 0.0;
  int incomplete = 0;
  for (int n = 0; n < 100; ++n)
  {
    const Vertex4 v = random_flat_foldable(rng);
    const ModeConstants k = mode_constants(v);
    // mode 1 in our labels: driver rho2, rho1 rho3 < 0, rho2 rho4 > 0
    const ConfigCurve m1 = trace_curve(v, 2, BranchLabel{-1, 1}, 50);
    // mode 2: driver rho1, rho1 rho3 > 0, rho2 rho4 < 0
    const ConfigCurve m2 = trace_curve(v, 1, BranchLabel{1, -1}, 50);
    incomplete += !m1.complete + !m2.complete;
    for (const FoldState& s : m1.samples)
    {
      const auto p = to_theorem_labels(s);
      // tan(p2/2) = -k1 tan(p1/2), multiplied through by cos(p1/2) cos(p2/2)
      worst = std::max(worst, std::abs(std::sin(p[1] / 2) * std::cos(p[0] / 2) + k.k1 * std::sin(p[0] / 2) * std::cos(p[1] / 2)));
      ++samples;
    }
    for (const FoldState& s : m2.samples)
    {
      const auto p = to_theorem_labels(s);
      // tan(p1/2) = k2 tan(p2/2)
      worst = std::max(worst, std::abs(std::sin(p[0] / 2) * std::cos(p[1] / 2) - k.k2 * std::sin(p[1] / 2) * std::cos(p[0] / 2)));
      ++samples;
    }
  }
  o.note("vertices: 100; samples: %ld; incomplete traces: %d; worst mode-relation defect %.3e", samples, incomplete, worst);
  o.pass = samples > 0 && incomplete == 0 && worst < 1e-9;
  return o;
}

/// Through-origin slopes t_{i+1} / t_i of the adjacent relation, from its exact
/// polynomial form c0 + cxx x^2 + cyy y^2 + cxy x y + c4 x^2 y^2.
std::vector<double> origin_slopes(const Vertex4& v, int i, AdjacentForm form)
{
  const auto f = [&](double x, double y) { return adjacent_residual(v, i, x, y, form); };
  const double c0 = f(0, 0);
  const double cxx = f(1, 0) - c0;
  const double cyy = f(0, 1) - c0;
  const double cxy = 0.5 * (f(1, 1) - f(1, -1));
  const double disc = cxy * cxy - 4 * cyy * cxx;
  if (disc < 0)
  {
    return {};
  }
  std::vector<double> m{(-cxy - std::sqrt(disc)) / (2 * cyy), (-cxy + std::sqrt(disc)) / (2 * cyy)};
  std::sort(m.begin(), m.end());
  return m;
}

Outcome adjacent_correction()
{
  Outcome o;
  const Vertex4 v({kPi / 3, kPi / 2, 2 * kPi / 3, kPi / 2});
  const double r = 2 - std::sqrt(3.0);
  std::vector<double> want{-1 / r, -r};
  // theorem labels p1, p2 are our creases 4 and 1
  const std::vector<double> corrected = origin_slopes(v, 4, AdjacentForm::corrected);
  const std::vector<double> printed = origin_slopes(v, 4, AdjacentForm::printed);
  double err_c = corrected.size() == 2 ? std::max(std::abs(corrected[0] - want[0]), std::abs(corrected[1] - want[1])) : INFINITY;
  double err_p = printed.size() == 2 ? std::min(std::abs(printed[0] - want[0]), std::abs(printed[1] - want[1])) : INFINITY;
  o.note("expected slopes: %.12f, %.12f", want[0], want[1]);
  if (corrected.size() == 2)
  {
    o.note("corrected form: %.12f, %.12f (max error %.3e)", corrected[0], corrected[1], err_c);
  }
  if (printed.size() == 2)
  {
    o.note("printed form:   %.12f, %.12f (closest slope off by %.3e)", printed[0], printed[1], err_p);
  }
  else
  {
    o.note("printed form: no real through-origin slopes");
  }
  o.pass = err_c < 1e-9 && err_p > 0.1;
  return o;
}

Outcome elliptic_example()
{
  Outcome o;
  const Vertex4 v({kPi / 4, kPi / 2, kPi / 4, kPi / 2});
  const std::vector<FoldState> quarter = candidate_states(v, 3, kPi / 2);
  double worst = quarter.empty() ? INFINITY : 0.0;
  for (const FoldState& s : quarter)
  {
    worst = std::max(worst, std::abs(std::abs(s.rho(1)) - kPi / 2));
  }
  o.note("rho3 = pi/2: %zu states; max ||rho1| - pi/2| = %.3e", quarter.size(), worst);
  bool certified = false;
  double flat_err = INFINITY;
  for (const FoldState& s : candidate_states(v, 3, 0.0))
  {
    const ClosureReport rep = oracle_solve(v, 3, 0.0, s);
    if (!rep.converged)
    {
      continue;
    }
    const double e = std::max(std::abs(std::abs(rep.state.rho(2)) - kPi), std::abs(std::abs(rep.state.rho(4)) - kPi));
    if (e < flat_err)
    {
      flat_err = e;
      certified = rep.residual < 1e-9;
      o.note("rho3 = 0: oracle state (%.9f, %.9f, %.9f, %.9f), residual %.3e", rep.state.rho(1), rep.state.rho(2),
             rep.state.rho(3), rep.state.rho(4), rep.residual);
    }
  }
  o.note("rho3 = 0: max ||rho2|,|rho4| - pi| = %.3e", flat_err);
  o.pass = worst < 1e-9 && certified && flat_err < 1e-6;
  return o;
}

Outcome self_duality()
{
  Outcome o;
  std::mt19937_64 rng(99);
  int fail = 0;
  for (int n = 0; n < 100; ++n)
  {
    const Vertex4 v = random_flat_foldable(rng);
    fail += !cyclically_equal(dual(v), v, 1e-12);
  }
  o.note("vertices: 100; not cyclically equal to their dual: %d", fail);
  o.pass = fail == 0;
  return o;
}

Outcome half_plane()
{
  Outcome o;
  const Vertex4 base({kPi / 4, kPi / 2, kPi / 4, kPi / 2});
  const std::vector<ThetaInterval> ib = achievable_theta(base);
  const std::vector<ThetaInterval> ih = achievable_theta(dual(base));
  if (ib.empty() || ih.empty())
  {
    o.note("no achievable theta");
    return o;
  }
  const double lo = std::max(ib[0].theta_lo, ih[0].theta_lo);
  const double hi = std::min(ib[0].theta_hi, ih[0].theta_hi);
  double worst = 0.0;
  int junctions = 0;
  for (int k = 0; k < 50; ++k)
  {
    const double theta = lo + (k + 0.5) * (hi - lo) / 50;
    for (const double d : half_plane_dihedrals(synchronize(base, CombineVariant::parallel, theta)))
    {
      worst = std::max(worst, std::abs(d - kPi));
      ++junctions;
    }
  }
  o.note("theta sweep [%.6f, %.6f], 50 samples; junctions %d; max |dihedral - pi| = %.3e", lo, hi, junctions, worst);
  o.pass = junctions == 200 && worst < 1e-8;
  return o;
}

Outcome split_check()
{
  Outcome o;
  const Vertex4 base({kPi / 4, kPi / 2, kPi / 4, kPi / 2});
  const Vertex4 twist({kPi / 4, kPi / 2, 3 * kPi / 4, kPi / 2});
  const auto [v1, v2] = split_combined(synchronize(base, CombineVariant::rotated, 1.2));
  const bool eq1 = cyclically_equal(v1, twist, 0.0);
  const bool eq2 = cyclically_equal(v2, twist, 0.0);
  o.note("V1 = (%.15f, %.15f, %.15f, %.15f); Kawasaki sum %.1e", v1.alpha(1), v1.alpha(2), v1.alpha(3), v1.alpha(4), v1.alternating_sum());
  o.note("V2 = (%.15f, %.15f, %.15f, %.15f); Kawasaki sum %.1e", v2.alpha(1), v2.alpha(2), v2.alpha(3), v2.alpha(4), v2.alternating_sum());
  o.pass = eq1 && eq2 && v1.alternating_sum() == 0.0 && v2.alternating_sum() == 0.0;
  return o;
}

Outcome auxetic_regimes()
{
  Outcome o;
  const auto t0 = Clock::now();
  const SquareTwistSheet s = build_square_twist_sheet(Vertex4({kPi / 4, kPi / 2, 3 * kPi / 4, kPi / 2}), 2, 2);
  const AuxeticReport rep = auxetic_sweep(s, 3, 0.0, kPi, 21);
  const double t = seconds_since(t0);
  int checked_low = 0;
  int checked_high = 0;
  int wrong = 0;
  for (std::size_t k = 0; k < rep.regimes.size(); ++k)
  {
    const double a = rep.samples[k].rho / kPi;
    const double b = rep.samples[k + 1].rho / kPi;
    if (a >= 0.05 - 1e-12 && b <= 0.45 + 1e-12)
    {
      ++checked_low;
      wrong += rep.regimes[k] != AuxeticRegime::two_contract_one_expand;
    }
    if (a >= 0.55 - 1e-12 && b <= 0.95 + 1e-12)
    {
      ++checked_high;
      wrong += rep.regimes[k] != AuxeticRegime::three_contract;
    }
  }
  std::ostringstream os;
  for (const AuxeticRegime r : rep.regimes)
  {
    os << (r == AuxeticRegime::two_contract_one_expand ? 'E' : r == AuxeticRegime::three_contract ? 'C' : '?');
  }
  o.note("3 layers, 2x2 cells, 21 samples on [0, pi]; regimes per interval: %s (E 2-contract/1-expand, C 3-contract)", os.str().c_str());
  o.note("intervals in (0.05pi, 0.45pi): %d; in (0.55pi, 0.95pi): %d; wrong: %d; runtime %.3f s", checked_low, checked_high, wrong, t);
  o.pass = checked_low > 0 && checked_high > 0 && wrong == 0 && t < 60.0;
  return o;
}

Outcome sheet_rigidity()
{
  Outcome o;
  const SquareTwistSheet s = build_square_twist_sheet(Vertex4({kPi / 4, kPi / 2, 3 * kPi / 4, kPi / 2}), 2, 2);
  double worst = 0.0;
  std::size_t vertices = 0;
  for (int k = 0; k <= 10; ++k)
  {
    const FoldedSheet f = fold_sheet(s, kPi * k / 10);
    for (std::size_t v = 0; v < f.vertex_states.size(); ++v)
    {
      worst = std::max({worst, f.vertex_residuals[v], ref::closure_defect(s.generator.alphas(), f.vertex_states[v].rhos())});
    }
    vertices = f.vertex_states.size();
  }
  double glue = 0.0;
  for (int k = 1; k <= 10; ++k)
  {
    const CwComplex cw = stack_complex(s, 2, kPi * k / 11);
    glue = std::max({glue, cw.glue_residual, cw.glue.max_deviation});
  }
  o.note("2x2 sheet: %zu interior vertices at 11 major angles; worst residual %.3e", vertices, worst);
  o.note("2-layer stack at 10 major angles: worst gluing residual %.3e", glue);
  o.pass = vertices == 16 && worst < 1e-9 && glue < 1e-8;
  return o;
}

} // namespace

int main()
{
  struct Criterion
  {
    const char* name;
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria{
      {"duality of configuration curves on 100 random vertices", duality_theorem},
      {"closure certification of every analytic state", oracle_certification},
      {"general solver reduces to the closed-form modes", theorem_one_reduction},
      {"corrected adjacent relation matches the mode slopes", adjacent_correction},
      {"elliptic worked example", elliptic_example},
      {"self-duality of Euclidean flat-foldable vertices", self_duality},
      {"half-plane junctions of the parallel combined vertex", half_plane},
      {"V1/V2 split of the rotated combined vertex", split_check},
      {"auxetic regimes of a 3-layer square-twist complex", auxetic_regimes},
      {"square-twist sheet rigidity and gluing", sheet_rigidity},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k)
  {
    Outcome o;
    try
    {
      o = criteria[k].run();
    }
    catch (const std::exception& e)
    {
      o.pass = false;
      o.log.push_back(std::string("exception: ") + e.what());
    }
    std::printf("%s %2zu %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].name);
    for (const std::string& l : o.log)
    {
      std::printf("       %s\n", l.c_str());
    }
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
