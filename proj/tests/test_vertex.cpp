#include <gtest/gtest.h>

#include <random>

#include "origami4/vertex.hpp"

using namespace origami4;

TEST(Vertex, RejectsSectorsOutsideOpenInterval)
{
  EXPECT_THROW(Vertex4({0.0, 1.0, 1.0, 1.0}), InputError);
  EXPECT_THROW(Vertex4({kPi, 1.0, 1.0, 1.0}), InputError);
  EXPECT_THROW(Vertex4({-0.1, 1.0, 1.0, 1.0}), InputError);
  EXPECT_THROW(Vertex4({NAN, 1.0, 1.0, 1.0}), InputError);
  EXPECT_NO_THROW(Vertex4({3.1, 3.1, 3.1, 3.1}));
}

TEST(Vertex, CyclicIndexing)
{
  const Vertex4 v({0.1, 0.2, 0.3, 0.4});
  EXPECT_EQ(v.alpha(5), 0.1);
  EXPECT_EQ(v.alpha(0), 0.4);
  EXPECT_EQ(v.shifted(1).alpha(1), 0.2);
  EXPECT_EQ(v.shifted(-1).alpha(1), 0.4);
}

TEST(Vertex, ClassifiesCurvatureAndFlatFoldability)
{
  const Vertex4 elliptic = Vertex4::from_degrees({45, 90, 45, 90});
  const VertexClass e = classify(elliptic);
  EXPECT_EQ(e.curvature, Curvature::elliptic);
  EXPECT_FALSE(e.flat_foldable);

  const Vertex4 twist = Vertex4::from_degrees({45, 90, 135, 90});
  EXPECT_EQ(classify(twist).curvature, Curvature::euclidean);
  EXPECT_TRUE(classify(twist).flat_foldable);
  EXPECT_TRUE(is_euclidean_flat_foldable(twist));

  const VertexClass h = classify(dual(elliptic));
  EXPECT_EQ(h.curvature, Curvature::hyperbolic);
  EXPECT_FALSE(h.flat_foldable);

  // Kawasaki holds but the sum is not 2 pi
  const Vertex4 ff_elliptic({1.0, 1.0, 0.5, 0.5});
  EXPECT_EQ(classify(ff_elliptic).curvature, Curvature::elliptic);
  EXPECT_TRUE(classify(ff_elliptic).flat_foldable);
  EXPECT_FALSE(is_euclidean_flat_foldable(ff_elliptic));
  EXPECT_EQ(to_string(Curvature::hyperbolic), "hyperbolic");
}

TEST(Vertex, DualIsInvolutionAndSwapsCurvature)
{
  const Vertex4 v({0.4, 1.1, 2.2, 0.9});
  const Vertex4 dd = dual(dual(v));
  for (int i = 1; i <= 4; ++i)
  {
    EXPECT_NEAR(dd.alpha(i), v.alpha(i), 1e-15);
  }
  EXPECT_EQ(dual(v).alpha(2), kPi - 1.1);
  EXPECT_EQ(classify(v).curvature, Curvature::elliptic);
  EXPECT_EQ(classify(dual(v)).curvature, Curvature::hyperbolic);
}

TEST(Vertex, CyclicEqualityIgnoresRotationButNotReflection)
{
  const Vertex4 v({0.1, 0.2, 0.3, 0.4});
  EXPECT_TRUE(cyclically_equal(v, v.shifted(2), 0.0));
  EXPECT_FALSE(cyclically_equal(v, Vertex4({0.4, 0.3, 0.2, 0.1}), 1e-12));
}

TEST(Vertex, SelfDualityOfEuclideanFlatFoldable)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, kPi - 0.05);
  for (int n = 0; n < 200; ++n)
  {
    const double a = u(rng);
    const double b = u(rng);
    const Vertex4 v({a, b, kPi - a, kPi - b});
    ASSERT_TRUE(is_euclidean_flat_foldable(v));
    EXPECT_TRUE(cyclically_equal(dual(v), v, 1e-12));
  }
}

TEST(FoldState, ValidatesAndClamps)
{
  EXPECT_THROW(FoldState({4.0, 0, 0, 0}), InputError);
  EXPECT_THROW(FoldState({NAN, 0, 0, 0}), InputError);
  const FoldState s({kPi + 5e-13, 0, 0, 0});
  EXPECT_EQ(s.rho(1), kPi);
  EXPECT_TRUE(std::isinf(s.t(1)));
  EXPECT_NEAR(FoldState({kPi / 2, 0, 0, 0}).t(1), 1.0, 1e-15);
  EXPECT_EQ(FoldState({0.1, -0.2, 0.3, -0.4}).negated().rho(2), 0.2);
}

TEST(FoldState, DistanceWrapsAroundPi)
{
  const FoldState a({kPi - 0.01, 0, 0, 0});
  const FoldState b({-kPi + 0.01, 0, 0, 0});
  EXPECT_NEAR(state_distance(a, b), 0.02, 1e-14);
}
