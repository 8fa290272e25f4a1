#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "origami4/errors.hpp"

namespace origami4
{

inline constexpr double kPi = std::numbers::pi;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct Tolerances
{
  double angle_eps = 1e-10;      // classification threshold (radians)
  double residual_tol = 1e-9;    // closure acceptance
  double solver_tol = 1e-12;     // root-finder / bisection convergence
  double trace_step_max = 0.01;  // continuation step cap (radians)

  void validate() const
  {
    if (!(angle_eps > 0.0) || !(residual_tol > 0.0) || !(solver_tol > 0.0) || !(trace_step_max > 0.0))
    {
      throw InputError("tolerances must be strictly positive");
    }
    if (!(angle_eps < 1e-6))
    {
      throw InputError("angle_eps must be below 1e-6");
    }
    if (!(trace_step_max <= 0.05))
    {
      throw InputError("trace_step_max must not exceed 0.05");
    }
  }
};

/// Proper rotation of R^3 acting on column vectors.
class Rotation3
{
public:
  Rotation3() : m_(Mat3::Identity()) {}

  /// Validates orthogonality (Frobenius 1e-12) and det > 0.
  static Rotation3 from_matrix(const Mat3& m)
  {
    const double orth = (m * m.transpose() - Mat3::Identity()).norm();
    if (!std::isfinite(orth) || orth >= 1e-12 || m.determinant() <= 0.0)
    {
      throw InputError("matrix is not a proper rotation");
    }
    return Rotation3(m, Unchecked{});
  }

  const Mat3& matrix() const { return m_; }

  Rotation3 operator*(const Rotation3& rhs) const { return Rotation3(m_ * rhs.m_, Unchecked{}); }
  Vec3 operator*(const Vec3& x) const { return m_ * x; }

  Rotation3 inverse() const { return Rotation3(m_.transpose(), Unchecked{}); }

  /// Axis-angle vector (matrix logarithm), angle in [0, pi].
  Vec3 log() const
  {
    const Eigen::AngleAxisd aa(m_);
    return aa.axis() * aa.angle();
  }

private:
  struct Unchecked
  {
  };
  Rotation3(const Mat3& m, Unchecked) : m_(m) {}

  friend Rotation3 rotation_about_axis(const Vec3& axis, double angle);
  friend Rotation3 rot_x(double angle);
  friend Rotation3 rot_z(double angle);

  Mat3 m_;
};

/// Right-handed rotation by `angle` about a unit `axis`.
inline Rotation3 rotation_about_axis(const Vec3& axis, double angle)
{
  const double n = axis.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-12)
  {
    std::ostringstream os;
    os << "rotation axis must be a unit vector (|axis| = " << n << ")";
    throw InputError(os.str());
  }
  if (!std::isfinite(angle))
  {
    throw InputError("rotation angle must be finite");
  }
  return Rotation3(Eigen::AngleAxisd(angle, axis).toRotationMatrix(), Rotation3::Unchecked{});
}

inline Rotation3 rot_x(double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 m;
  m << 1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c;
  return Rotation3(m, Rotation3::Unchecked{});
}

inline Rotation3 rot_z(double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 m;
  m << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return Rotation3(m, Rotation3::Unchecked{});
}

/// Frobenius norm of (r - I).
inline double rotation_residual(const Rotation3& r)
{
  return (r.matrix() - Mat3::Identity()).norm();
}

/// Maps an angle into (-pi, pi].
inline double wrap_angle(double a)
{
  if (!std::isfinite(a))
  {
    throw InputError("cannot wrap a non-finite angle");
  }
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi)
  {
    w += 2.0 * kPi;
  }
  return w;
}

/// Length of the shortest arc between two angles.
inline double angle_distance(double a, double b)
{
  return std::abs(wrap_angle(a - b));
}

/// Unsigned angle between two nonzero vectors, accurate near 0 and pi.
inline double vector_angle(const Vec3& a, const Vec3& b)
{
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

} // namespace origami4
