#pragma once

#include <array>
#include <cmath>
#include <sstream>

#include "origami4/vertex.hpp"

namespace origami4
{

struct ModeConstants
{
  double k1;
  double k2;
};

/// k1 = cos((a+b)/2) / cos((a-b)/2),  k2 = sin((a-b)/2) / sin((a+b)/2).
inline ModeConstants mode_constants(double alpha, double beta, double angle_eps = Tolerances{}.angle_eps)
{
  if (!(alpha > 0.0 && alpha < kPi && beta > 0.0 && beta < kPi))
  {
    throw InputError("mode constants need sector angles in (0, pi)");
  }
  const double d1 = std::cos((alpha - beta) / 2.0);
  const double d2 = std::sin((alpha + beta) / 2.0);
  if (std::abs(d1) <= angle_eps)
  {
    throw DegenerateError("k1 is singular: cos((alpha - beta)/2) vanishes");
  }
  if (std::abs(d2) <= angle_eps)
  {
    throw DegenerateError("k2 is singular: sin((alpha + beta)/2) vanishes");
  }
  return {std::cos((alpha + beta) / 2.0) / d1, std::sin((alpha - beta) / 2.0) / d2};
}

inline ModeConstants mode_constants(const Vertex4& v, double angle_eps = Tolerances{}.angle_eps)
{
  return mode_constants(v.alpha(1), v.alpha(2), angle_eps);
}

/// Closed-form mode labels use creases shifted by one against the sector list:
/// mode-equation crease j sits between sectors j-1 and j, i.e. it is our crease j-1.
/// Theorem-label state (p1, p2, p3, p4) = our (rho4, rho1, rho2, rho3).
inline std::array<double, 4> to_theorem_labels(const FoldState& s)
{
  return {s.rho(4), s.rho(1), s.rho(2), s.rho(3)};
}

inline FoldState from_theorem_labels(const std::array<double, 4>& p)
{
  return FoldState({p[1], p[2], p[3], p[0]});
}

/// Creases (our labels) that carry the equal "major" folding angle in a mode.
/// Mode 1 (p1 = p3): creases 2 and 4. Mode 2 (p2 = p4): creases 1 and 3.
inline std::array<int, 2> mode_major_creases(int mode)
{
  if (mode == 1)
  {
    return {2, 4};
  }
  if (mode == 2)
  {
    return {1, 3};
  }
  throw InputError("mode must be 1 or 2");
}

/// 2 atan(k tan(x/2)), continuous through x = +-pi.
inline double scale_half_tangent(double k, double x)
{
  return 2.0 * std::atan2(k * std::sin(x / 2.0), std::cos(x / 2.0));
}

/// Inverse of scale_half_tangent for k != 0.
inline double unscale_half_tangent(double k, double y)
{
  if (k == 0.0)
  {
    throw DegenerateError("mode constant is zero; the major angle cannot be recovered from a minor crease");
  }
  return 2.0 * std::atan2(std::copysign(1.0, k) * std::sin(y / 2.0), std::abs(k) * std::cos(y / 2.0));
}

inline void require_euclidean_flat_foldable(const Vertex4& v, double angle_eps)
{
  const VertexClass c = classify(v, angle_eps);
  if (c.curvature != Curvature::euclidean || !c.flat_foldable)
  {
    std::ostringstream os;
    os << "vertex is " << to_string(c.curvature) << (c.flat_foldable ? ", flat-foldable" : ", not flat-foldable")
       << "; closed-form modes need a Euclidean flat-foldable vertex";
    throw DomainError(os.str());
  }
}

/// Closed-form folding mode of a Euclidean flat-foldable vertex (alpha, beta, pi-alpha, pi-beta).
///
/// In theorem labels, mode 1 is (d, -m1, d, m1) with m1 = 2 atan(k1 tan(d/2)),
/// mode 2 is (m2, d, -m2, d) with m2 = 2 atan(k2 tan(d/2)). The result is in our labels.
inline FoldState fold_mode(const Vertex4& v, int mode, double driver, const Tolerances& tol = {})
{
  require_euclidean_flat_foldable(v, tol.angle_eps);
  if (!std::isfinite(driver) || std::abs(driver) > kPi + 1e-12)
  {
    throw RangeError("driver must lie in [-pi, pi]");
  }
  const ModeConstants k = mode_constants(v, tol.angle_eps);
  if (mode == 1)
  {
    const double m = scale_half_tangent(k.k1, driver);
    return from_theorem_labels({driver, -m, driver, m});
  }
  if (mode == 2)
  {
    const double m = scale_half_tangent(k.k2, driver);
    return from_theorem_labels({m, driver, -m, driver});
  }
  throw InputError("mode must be 1 or 2");
}

/// Mode state given the folding angle of any one crease (our label).
inline FoldState fold_mode_from_crease(const Vertex4& v, int mode, int crease, double value, const Tolerances& tol = {})
{
  const std::array<int, 2> major = mode_major_creases(mode);
  const int c = slot(crease) + 1;
  if (c == major[0] || c == major[1])
  {
    return fold_mode(v, mode, value, tol);
  }
  require_euclidean_flat_foldable(v, tol.angle_eps);
  const ModeConstants k = mode_constants(v, tol.angle_eps);
  const FoldState unit = fold_mode(v, mode, kPi / 2.0, tol);
  // minor creases carry +-m; recover the sign this crease takes relative to m
  const double kk = mode == 1 ? k.k1 : k.k2;
  const double m_unit = scale_half_tangent(kk, kPi / 2.0);
  const double sign = (m_unit == 0.0) ? 1.0 : (unit.rho(c) / m_unit > 0.0 ? 1.0 : -1.0);
  return fold_mode(v, mode, unscale_half_tangent(kk, sign * value), tol);
}

} // namespace origami4
