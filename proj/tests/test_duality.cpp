#include <gtest/gtest.h>

#include <random>

#include "origami4/duality.hpp"
#include "support/reference.hpp"

using namespace origami4;

TEST(Duality, PredictedPartnerKeepsTheDriverPair)
{
  const FoldState s({0.1, 0.2, 0.3, 0.4});
  const FoldState p = predicted_dual_state(s, 1);
  EXPECT_EQ(p.rhos(), (std::array<double, 4>{0.1, -0.2, 0.3, -0.4}));
  EXPECT_EQ(predicted_dual_state(s, 2).rhos(), (std::array<double, 4>{-0.1, 0.2, -0.3, 0.4}));
}

TEST(Duality, FrozenPartnersCloseOnTheDual)
{
  // state of g at rho1 = 0.5 and the matching state of its dual, both from an independent solver
  const Vertex4 g({1.0, 1.3, 0.9, 1.7});
  const FoldState s({0.5, 1.412891593495818, 0.8933050063894559, 1.7117201885787772});
  const FoldState h({0.5, -1.412891593495818, 0.8933050063894568, -1.7117201885787763});
  EXPECT_LT(ref::closure_defect(dual(g).alphas(), h.rhos()), 1e-12);
  EXPECT_LT(state_distance(predicted_dual_state(s, 1), h), 1e-12);
}

TEST(Duality, SymmetricEllipticVertex)
{
  const DualityReport rep = verify_duality(Vertex4({kPi / 4, kPi / 2, kPi / 4, kPi / 2}), 50);
  EXPECT_TRUE(rep.confirmed()) << rep.diagnostic;
  EXPECT_LT(rep.max_magnitude_mismatch, 1e-9);
  EXPECT_GE(rep.samples, 100);
}

TEST(Duality, GeneralVertexOnEveryDriver)
{
  const Vertex4 g({1.0, 1.3, 0.9, 1.7});
  for (int d = 1; d <= 4; ++d)
  {
    const DualityReport rep = verify_duality(g, 30, d);
    EXPECT_TRUE(rep.confirmed()) << "driver " << d << ": " << rep.diagnostic;
    for (const DualCurvePair& p : rep.pairs)
    {
      for (std::size_t k = 0; k < p.dual_curve.samples.size(); ++k)
      {
        EXPECT_LT(ref::closure_defect(rep.dual_vertex.alphas(), p.dual_curve.samples[k].rhos()), 1e-9);
      }
    }
  }
}

TEST(Duality, RandomVertices)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.2, kPi - 0.2);
  int with_curves = 0;
  for (int n = 0; n < 20; ++n)
  {
    const Vertex4 v({u(rng), u(rng), u(rng), u(rng)});
    const DualityReport rep = verify_duality(v, 20);
    if (rep.pairs.empty())
    {
      EXPECT_FALSE(rep.diagnostic.empty());
      continue;
    }
    ++with_curves;
    EXPECT_TRUE(rep.confirmed()) << rep.diagnostic;
  }
  EXPECT_GT(with_curves, 10);
}
