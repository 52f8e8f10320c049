#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "rwrs/rng.hpp"

using namespace rwrs;

TEST(Rng, DeriveSeedIsPureAndSpreads) {
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
  EXPECT_NE(derive_seed(7, 3), derive_seed(7, 4));
  EXPECT_NE(derive_seed(7, 3), derive_seed(8, 3));
  EXPECT_EQ(derive_seed(7, 3, 9), derive_seed(derive_seed(7, 3), 9));
}

TEST(Rng, UnitIsOpen) {
  EXPECT_GT(to_unit(0), 0.0);
  EXPECT_LT(to_unit(~0ULL), 1.0);
}

TEST(Rng, BelowStaysInRange) {
  SplitMix64 g(1);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(g.below(7), 7u);
}

// Chi-square on the digit source for a power of two and a non power of two.
TEST(Rng, DigitSourceIsUniform) {
  for (unsigned bound : {6u, 8u, 10u}) {
    DigitSource src(42, bound);
    std::array<double, 16> hist{};
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) hist[src.draw()] += 1;
    double chi2 = 0, expect = static_cast<double>(draws) / bound;
    for (unsigned k = 0; k < bound; ++k) chi2 += (hist[k] - expect) * (hist[k] - expect) / expect;
    // 99.9% quantile of chi2 with 9 degrees of freedom is 27.9
    EXPECT_LT(chi2, 27.9) << "bound " << bound;
  }
}
