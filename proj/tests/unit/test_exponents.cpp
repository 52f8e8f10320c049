#include <gtest/gtest.h>

#include <cmath>

#include "rwrs/exponents.hpp"

using namespace rwrs;

TEST(Exponents, RegionInteriors) {
  struct Case {
    double alpha, beta;
    int d;
    Region region;
    double zeta;
  };
  for (const Case& c : {Case{2, 0.7, 5, Region::I, 0.4}, Case{2, 1.2, 5, Region::II, 0.8},
                        Case{4, 0.9, 5, Region::III, 4.5 / 7}, Case{4, 1.1, 5, Region::IV, 5.8 / 7},
                        Case{2, 1.6, 5, Region::V, 1.2}}) {
    ExponentResult r = classify({c.alpha, c.beta, c.d});
    EXPECT_EQ(r.region, c.region) << c.alpha << " " << c.beta;
    EXPECT_NEAR(r.zeta, c.zeta, 1e-12);
    EXPECT_FALSE(r.on_boundary);
  }
  EXPECT_TRUE(classify({2, 0.7, 5}).needs_y0);
}

TEST(Exponents, OutOfScope) {
  EXPECT_EQ(classify({1, 1, 5}).region, Region::out_of_scope);
  EXPECT_EQ(classify({2, 0.5, 5}).region, Region::out_of_scope);
  EXPECT_EQ(classify({2, 1, 2}).region, Region::out_of_scope);
  EXPECT_TRUE(std::isnan(classify({2, 1, 2}).zeta));
}

TEST(Exponents, BoundaryOwnership) {
  ExponentResult r = classify({4, 1, 5});
  EXPECT_EQ(r.region, Region::III);
  EXPECT_TRUE(r.on_boundary);
  EXPECT_EQ(r.neighbour, Region::IV);
  r = classify({2, boundary_I_II(2), 5});
  EXPECT_EQ(r.region, Region::II);
  EXPECT_EQ(r.neighbour, Region::I);
  r = classify({2, 1.5, 5});
  EXPECT_EQ(r.region, Region::V);
  EXPECT_TRUE(r.on_boundary);
}

// zeta is continuous across every boundary.
TEST(Exponents, ContinuityProperty) {
  for (int d = 3; d <= 12; ++d)
    for (double alpha = 1.05; alpha < 10; alpha *= 1.3)
      for (const auto& b : boundary_continuity(d, alpha)) EXPECT_NEAR(b.zeta_below, b.zeta_above, 1e-12) << b.name;
}

TEST(Exponents, ZetaIsNonDecreasingInBeta) {
  for (int d : {3, 5, 8})
    for (double alpha : {1.5, 2.5, 6.0}) {
      double last = -1;
      for (double beta = 0.51; beta < 3; beta += 0.01) {
        double z = classify({alpha, beta, d}).zeta;
        EXPECT_GE(z, last - 1e-12);
        last = z;
      }
    }
}

TEST(Exponents, IidRegimes) {
  EXPECT_EQ(iid_exponent(2, 0.8).regime, "gaussian");
  EXPECT_NEAR(iid_exponent(2, 0.8).zeta, 0.6, 1e-12);
  EXPECT_EQ(iid_exponent(0.5, 1.5).regime, "one-big-jump");
  EXPECT_NEAR(iid_exponent(0.5, 1.5).zeta, 0.75, 1e-12);
  EXPECT_EQ(iid_exponent(3, 1.2).regime, "superlinear-collective");
  EXPECT_NEAR(iid_exponent(3, 1.2).zeta, 1.6, 1e-12);
}
