#pragma once

#include <array>
#include <cmath>
#include <sstream>

#include "origami4/vertex.hpp"

namespace origami4
{

/// Loop product around the vertex.
///
/// Crease c1 lies along +x in the sheet plane z = 0. Walking counterclockwise,
/// each factor folds about the current crease (local x axis) by rho_i and then
/// turns in-plane by the next sector angle:
///   F = Rx(rho1) Rz(alpha2) Rx(rho2) Rz(alpha3) Rx(rho3) Rz(alpha4) Rx(rho4) Rz(alpha1).
/// Positive rho lifts the counterclockwise neighbour toward +z (valley).
inline Rotation3 fold_map(const Vertex4& v, const FoldState& s)
{
  Rotation3 f;
  for (int i = 1; i <= 4; ++i)
  {
    f = f * rot_x(s.rho(i)) * rot_z(v.alpha(i + 1));
  }
  return f;
}

inline double closure_residual(const Vertex4& v, const FoldState& s)
{
  return rotation_residual(fold_map(v, s));
}

struct ClosureReport
{
  FoldState state;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

namespace detail
{

inline Mat3 skew(const Vec3& w)
{
  Mat3 k;
  k << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
  return k;
}

/// Inverse right Jacobian of SO(3) at log vector w.
inline Mat3 right_jacobian_inverse(const Vec3& w)
{
  const double th = w.norm();
  const Mat3 k = skew(w);
  if (th < 1e-8)
  {
    return Mat3::Identity() + 0.5 * k + (1.0 / 12.0) * k * k;
  }
  const double s = std::sin(th);
  if (std::abs(s) < 1e-12)
  {
    return Mat3::Identity() + 0.5 * k;
  }
  const double c = (1.0 / (th * th)) - (1.0 + std::cos(th)) / (2.0 * th * s);
  return Mat3::Identity() + 0.5 * k + c * k * k;
}

/// Body-frame fold axes a_i with dF = F [sum_i drho_i a_i]_x.
inline std::array<Vec3, 4> fold_axes(const Vertex4& v, const std::array<double, 4>& rho)
{
  std::array<Vec3, 4> axes;
  Rotation3 q;
  for (int i = 4; i >= 1; --i)
  {
    q = rot_z(v.alpha(i + 1)) * q;
    axes[slot(i)] = q.matrix().transpose() * Vec3::UnitX();
    q = rot_x(rho[slot(i)]) * q;
  }
  return axes;
}

inline Rotation3 loop_product(const Vertex4& v, const std::array<double, 4>& rho)
{
  Rotation3 f;
  for (int i = 1; i <= 4; ++i)
  {
    f = f * rot_x(rho[slot(i)]) * rot_z(v.alpha(i + 1));
  }
  return f;
}

} // namespace detail

/// Damped Newton on the closure log vector with crease `driver_index` held at `driver`.
inline ClosureReport oracle_solve(const Vertex4& v,
                                  int driver_index,
                                  double driver,
                                  const FoldState& initial_guess,
                                  const Tolerances& tol = {})
{
  if (driver_index < 1 || driver_index > 4)
  {
    throw InputError("driver index must be in 1..4");
  }
  constexpr int kMaxIterations = 50;
  constexpr double kPolish = 1e-14;

  std::array<double, 4> rho = initial_guess.rhos();
  rho[slot(driver_index)] = driver;
  std::array<int, 3> free{};
  for (int i = 1, n = 0; i <= 4; ++i)
  {
    if (i != driver_index)
    {
      free[n++] = i;
    }
  }

  ClosureReport rep;
  Rotation3 f = detail::loop_product(v, rho);
  double res = rotation_residual(f);
  int it = 0;
  while (res > kPolish && it < kMaxIterations)
  {
    const std::array<Vec3, 4> axes = detail::fold_axes(v, rho);
    const Vec3 w = f.log();
    Mat3 a;
    for (int k = 0; k < 3; ++k)
    {
      a.col(k) = axes[slot(free[k])];
    }
    const Mat3 jac = detail::right_jacobian_inverse(w) * a;
    const Vec3 step = jac.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(-w);
    if (!step.allFinite())
    {
      break;
    }
    double lambda = 1.0;
    bool improved = false;
    for (int halvings = 0; halvings < 40; ++halvings)
    {
      std::array<double, 4> trial = rho;
      for (int k = 0; k < 3; ++k)
      {
        trial[slot(free[k])] += lambda * step[k];
      }
      const Rotation3 ft = detail::loop_product(v, trial);
      const double rt = rotation_residual(ft);
      if (rt < res)
      {
        rho = trial;
        f = ft;
        res = rt;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    ++it;
    if (!improved)
    {
      break;
    }
  }

  for (int i = 1; i <= 4; ++i)
  {
    if (i != driver_index)
    {
      rho[slot(i)] = wrap_angle(rho[slot(i)]);
    }
  }
  rep.iterations = it;
  rep.residual = res;
  rep.converged = res < tol.residual_tol;
  if (std::abs(rho[slot(driver_index)]) > kPi + 1e-12)
  {
    rep.converged = false;
    rho[slot(driver_index)] = wrap_angle(rho[slot(driver_index)]);
  }
  rep.state = FoldState(rho);
  return rep;
}

} // namespace origami4
