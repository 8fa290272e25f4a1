#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "origami4/numerics.hpp"

namespace origami4
{

/// Zero-based storage slot for a one-based cyclic crease or sector index.
inline int slot(int i)
{
  return ((i - 1) % 4 + 4) % 4;
}

/// Degree-4 vertex: sector angles in counterclockwise order.
/// Crease i lies between sectors i and i+1; crease 4 lies between sectors 4 and 1.
class Vertex4
{
public:
  explicit Vertex4(const std::array<double, 4>& alphas) : alphas_(alphas)
  {
    double sum = 0.0;
    for (int k = 0; k < 4; ++k)
    {
      const double a = alphas_[k];
      if (!std::isfinite(a) || !(a > 0.0) || !(a < kPi))
      {
        std::ostringstream os;
        os << "sector angle alpha" << (k + 1) << " = " << a << " outside (0, pi)";
        throw InputError(os.str());
      }
      sum += a;
    }
    if (!(sum < 4.0 * kPi))
    {
      throw InputError("sector angle sum must be below 4 pi");
    }
  }

  static Vertex4 from_degrees(const std::array<double, 4>& deg)
  {
    std::array<double, 4> rad{};
    for (int k = 0; k < 4; ++k)
    {
      rad[k] = deg[k] * kPi / 180.0;
    }
    return Vertex4(rad);
  }

  /// Sector angle alpha_i, cyclic one-based index.
  double alpha(int i) const { return alphas_[slot(i)]; }
  const std::array<double, 4>& alphas() const { return alphas_; }

  double sum() const { return alphas_[0] + alphas_[1] + alphas_[2] + alphas_[3]; }

  /// Kawasaki alternating sum alpha1 - alpha2 + alpha3 - alpha4.
  double alternating_sum() const { return alphas_[0] - alphas_[1] + alphas_[2] - alphas_[3]; }

  /// Same vertex with its labels advanced: alpha'_i = alpha_{i+k}.
  Vertex4 shifted(int k) const
  {
    return Vertex4({alpha(1 + k), alpha(2 + k), alpha(3 + k), alpha(4 + k)});
  }

  bool operator==(const Vertex4& o) const { return alphas_ == o.alphas_; }

private:
  std::array<double, 4> alphas_;
};

enum class Curvature
{
  euclidean,
  elliptic,
  hyperbolic
};

inline std::string to_string(Curvature c)
{
  switch (c)
  {
    case Curvature::euclidean:
      return "euclidean";
    case Curvature::elliptic:
      return "elliptic";
    case Curvature::hyperbolic:
      return "hyperbolic";
  }
  return "unknown";
}

struct VertexClass
{
  Curvature curvature;
  bool flat_foldable;
};

inline VertexClass classify(const Vertex4& v, double angle_eps = Tolerances{}.angle_eps)
{
  const double excess = v.sum() - 2.0 * kPi;
  VertexClass out{};
  if (std::abs(excess) < angle_eps)
  {
    out.curvature = Curvature::euclidean;
  }
  else
  {
    out.curvature = excess < 0.0 ? Curvature::elliptic : Curvature::hyperbolic;
  }
  out.flat_foldable = std::abs(v.alternating_sum()) < angle_eps;
  return out;
}

inline bool is_euclidean_flat_foldable(const Vertex4& v, double angle_eps = Tolerances{}.angle_eps)
{
  const VertexClass c = classify(v, angle_eps);
  return c.curvature == Curvature::euclidean && c.flat_foldable;
}

/// Dual vertex (pi - alpha_i).
inline Vertex4 dual(const Vertex4& v)
{
  return Vertex4({kPi - v.alpha(1), kPi - v.alpha(2), kPi - v.alpha(3), kPi - v.alpha(4)});
}

/// True when some cyclic rotation of `a` matches `b` within `tol`. Reflections are not identified.
inline bool cyclically_equal(const Vertex4& a, const Vertex4& b, double tol)
{
  for (int k = 0; k < 4; ++k)
  {
    bool all = true;
    for (int i = 1; i <= 4 && all; ++i)
    {
      all = std::abs(a.alpha(i + k) - b.alpha(i)) <= tol;
    }
    if (all)
    {
      return true;
    }
  }
  return false;
}

/// Folding angles rho_1..rho_4 in [-pi, pi]; positive is valley.
class FoldState
{
public:
  FoldState() : rhos_{0.0, 0.0, 0.0, 0.0} {}

  explicit FoldState(const std::array<double, 4>& rhos) : rhos_(rhos)
  {
    for (int k = 0; k < 4; ++k)
    {
      double& r = rhos_[k];
      if (!std::isfinite(r) || std::abs(r) > kPi + 1e-12)
      {
        std::ostringstream os;
        os << "folding angle rho" << (k + 1) << " = " << r << " outside [-pi, pi]";
        throw InputError(os.str());
      }
      r = std::clamp(r, -kPi, kPi);
    }
  }

  double rho(int i) const { return rhos_[slot(i)]; }
  const std::array<double, 4>& rhos() const { return rhos_; }

  /// Half-angle tangent; infinite at |rho| = pi.
  double t(int i) const
  {
    const double r = rho(i);
    if (std::abs(r) == kPi)
    {
      return std::copysign(INFINITY, r);
    }
    return std::tan(r / 2.0);
  }

  FoldState negated() const { return FoldState({-rhos_[0], -rhos_[1], -rhos_[2], -rhos_[3]}); }

  bool operator==(const FoldState& o) const { return rhos_ == o.rhos_; }

private:
  std::array<double, 4> rhos_;
};

/// Largest wrapped componentwise difference between two states.
inline double state_distance(const FoldState& a, const FoldState& b)
{
  double d = 0.0;
  for (int i = 1; i <= 4; ++i)
  {
    d = std::max(d, angle_distance(a.rho(i), b.rho(i)));
  }
  return d;
}

} // namespace origami4
