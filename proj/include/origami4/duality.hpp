#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "origami4/kinematics_gen.hpp"
#include "origami4/vertex.hpp"

namespace origami4
{

/// One traced branch of a vertex paired with the dual's curve at the same driver values.
struct DualCurvePair
{
  BranchLabel branch;
  ConfigCurve curve;
  ConfigCurve dual_curve;
  /// Largest componentwise | |rho| - |rho*| | over the samples.
  double max_magnitude_mismatch = 0.0;
  /// Largest deviation from "driver pair preserved, other pair negated".
  double max_pattern_deviation = 0.0;
};

struct DualityReport
{
  Vertex4 vertex;
  Vertex4 dual_vertex;
  int driver_index = 1;
  std::vector<DualCurvePair> pairs;
  double max_magnitude_mismatch = 0.0;
  double max_pattern_deviation = 0.0;
  int samples = 0;
  bool complete = true;
  std::string diagnostic;

  /// Every curve matched within `tol` in magnitude and sign pattern.
  bool confirmed(double tol = 1e-6) const
  {
    return complete && !pairs.empty() && max_magnitude_mismatch < tol && max_pattern_deviation < tol;
  }
};

/// The dual partner the kinematic equivalence predicts: the opposite pair through the
/// driver keeps its angles, the other pair changes sign.
inline FoldState predicted_dual_state(const FoldState& s, int driver_index)
{
  std::array<double, 4> r = s.rhos();
  r[slot(driver_index + 1)] = -r[slot(driver_index + 1)];
  r[slot(driver_index + 3)] = -r[slot(driver_index + 3)];
  return FoldState(r);
}

/// Traces every realizable branch of v on its primary interval and traces dual(v) on
/// the same label at the same driver values, starting from the dual state nearest the
/// predicted partner and continuing independently.
inline DualityReport verify_duality(const Vertex4& v, int n_samples, int driver_index = 1, const Tolerances& tol = {})
{
  DualityReport rep{v, dual(v), driver_index, {}, 0.0, 0.0, 0, true, {}};
  for (const BranchLabel& b : BranchLabel::all())
  {
    const FoldingRange r = folding_range(v, driver_index, b, tol);
    if (r.empty())
    {
      continue;
    }
    const std::vector<double> xs = sweep_drivers(primary_interval(r), n_samples, tol);
    ConfigCurve curve = trace_curve_at(v, driver_index, b, xs, tol);
    if (curve.samples.empty())
    {
      continue;
    }
    const FoldState seed = predicted_dual_state(curve.samples.front(), driver_index);
    DualCurvePair p{b, std::move(curve), trace_curve_at(rep.dual_vertex, driver_index, b, xs, tol, &seed), 0.0, 0.0};
    if (!p.curve.complete || !p.dual_curve.complete || p.dual_curve.samples.size() != p.curve.samples.size())
    {
      rep.complete = false;
      rep.diagnostic = !p.curve.complete ? p.curve.diagnostic : "dual: " + p.dual_curve.diagnostic;
    }
    const std::size_t n = std::min(p.curve.samples.size(), p.dual_curve.samples.size());
    for (std::size_t k = 0; k < n; ++k)
    {
      const FoldState& a = p.curve.samples[k];
      const FoldState& h = p.dual_curve.samples[k];
      const FoldState want = predicted_dual_state(a, driver_index);
      for (int i = 1; i <= 4; ++i)
      {
        p.max_magnitude_mismatch = std::max(p.max_magnitude_mismatch, std::abs(std::abs(a.rho(i)) - std::abs(h.rho(i))));
        p.max_pattern_deviation = std::max(p.max_pattern_deviation, angle_distance(h.rho(i), want.rho(i)));
      }
    }
    rep.samples += static_cast<int>(n);
    rep.max_magnitude_mismatch = std::max(rep.max_magnitude_mismatch, p.max_magnitude_mismatch);
    rep.max_pattern_deviation = std::max(rep.max_pattern_deviation, p.max_pattern_deviation);
    rep.pairs.push_back(std::move(p));
  }
  if (rep.pairs.empty())
  {
    rep.diagnostic = "no branch of the vertex has a closed state";
  }
  return rep;
}

} // namespace origami4
