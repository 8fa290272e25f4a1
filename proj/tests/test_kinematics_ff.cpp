#include <gtest/gtest.h>

#include <random>

#include "origami4/closure.hpp"
#include "origami4/kinematics_ff.hpp"
#include "support/reference.hpp"

using namespace origami4;

TEST(ModeConstants, HandValues)
{
  const ModeConstants k = mode_constants(kPi / 3, kPi / 2);
  EXPECT_NEAR(k.k1, 2.0 - std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(k.k2, -(2.0 - std::sqrt(3.0)), 1e-15);
  const ModeConstants sq = mode_constants(kPi / 4, kPi / 2);
  EXPECT_NEAR(sq.k1, std::cos(3 * kPi / 8) / std::cos(kPi / 8), 1e-15);
  EXPECT_NEAR(sq.k2, -std::sin(kPi / 8) / std::sin(3 * kPi / 8), 1e-15);
}

TEST(ModeConstants, RejectsDegenerateAndInvalid)
{
  EXPECT_THROW(mode_constants(0.0, 1.0), InputError);
  EXPECT_THROW(mode_constants(1.0, kPi), InputError);
}

TEST(FoldMode, RejectsNonFlatFoldable)
{
  EXPECT_THROW(fold_mode(Vertex4::from_degrees({45, 90, 45, 90}), 1, 0.5), DomainError);
  EXPECT_THROW(fold_mode(Vertex4({1.0, 0.5, 1.0, 0.5}), 1, 0.5), DomainError);
  const Vertex4 ok = Vertex4::from_degrees({45, 90, 135, 90});
  EXPECT_THROW(fold_mode(ok, 3, 0.5), InputError);
  EXPECT_THROW(fold_mode(ok, 1, 4.0), RangeError);
}

TEST(FoldMode, SquareTwistQuarterTurn)
{
  const FoldState s = fold_mode(Vertex4::from_degrees({45, 90, 135, 90}), 1, kPi / 2);
  EXPECT_NEAR(s.rho(1), -kPi / 4, 1e-15);
  EXPECT_NEAR(s.rho(2), kPi / 2, 1e-15);
  EXPECT_NEAR(s.rho(3), kPi / 4, 1e-15);
  EXPECT_NEAR(s.rho(4), kPi / 2, 1e-15);
}

TEST(FoldMode, TheoremLabelRoundTrip)
{
  const FoldState s({0.1, 0.2, 0.3, 0.4});
  const std::array<double, 4> p = to_theorem_labels(s);
  EXPECT_EQ(p[0], 0.4);
  EXPECT_EQ(p[1], 0.1);
  EXPECT_EQ(from_theorem_labels(p).rhos(), s.rhos());
  EXPECT_EQ(mode_major_creases(1), (std::array<int, 2>{2, 4}));
  EXPECT_EQ(mode_major_creases(2), (std::array<int, 2>{1, 3}));
}

TEST(FoldMode, RandomModesCloseUnderIndependentCheck)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(0.05, kPi - 0.05);
  std::uniform_real_distribution<double> ud(-kPi, kPi);
  int checked = 0;
  for (int n = 0; n < 200; ++n)
  {
    const double a = ua(rng);
    const double b = ua(rng);
    const Vertex4 v({a, b, kPi - a, kPi - b});
    for (int mode = 1; mode <= 2; ++mode)
    {
      const double d = ud(rng);
      const FoldState s = fold_mode(v, mode, d);
      EXPECT_LT(closure_residual(v, s), 1e-9);
      EXPECT_LT(ref::closure_defect(v.alphas(), s.rhos()), 1e-9);
      const std::array<int, 2> m = mode_major_creases(mode);
      EXPECT_NEAR(s.rho(m[0]), s.rho(m[1]), 1e-15);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 400);
}

TEST(FoldMode, FromAnyCreaseRoundTrip)
{
  const Vertex4 v({0.7, 1.9, kPi - 0.7, kPi - 1.9});
  for (int mode = 1; mode <= 2; ++mode)
  {
    const FoldState s = fold_mode(v, mode, 1.1);
    for (int c = 1; c <= 4; ++c)
    {
      const FoldState back = fold_mode_from_crease(v, mode, c, s.rho(c));
      EXPECT_LT(state_distance(back, s), 1e-12) << "mode " << mode << " crease " << c;
    }
  }
}

TEST(FoldMode, HalfTangentScalingInverts)
{
  for (const double x : {-3.0, -1.0, 0.0, 0.4, 2.9})
  {
    EXPECT_NEAR(unscale_half_tangent(-0.3, scale_half_tangent(-0.3, x)), x, 1e-14);
  }
  EXPECT_NEAR(scale_half_tangent(0.5, kPi), kPi, 1e-15);
  EXPECT_THROW(unscale_half_tangent(0.0, 1.0), DegenerateError);
}
