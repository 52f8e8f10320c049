#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rwrs/green_kernel.hpp"

using namespace rwrs;

TEST(Bessel, ScaledValues) {
  EXPECT_NEAR(scaled_bessel_i(0, 1), 0.46575960759364043, 1e-13);
  EXPECT_NEAR(scaled_bessel_i(1, 1), 0.20791041534970844, 1e-13);
  EXPECT_NEAR(scaled_bessel_i(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(scaled_bessel_i(2, 0), 0.0, 1e-15);
}

TEST(GaussLegendre, IntegratesPolynomials) {
  GaussLegendre g = gauss_legendre(8);
  double s = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 14);
  EXPECT_NEAR(s, 2.0 / 15, 1e-13);
}

// Watson's integral and the known d = 4, 5 values.
TEST(Green, OriginValues) {
  EXPECT_NEAR(green_value(3, std::vector<Coord>(3, 0)).value, 1.516386059151978, 1e-8);
  EXPECT_NEAR(green_value(4, std::vector<Coord>(4, 0)).value, 1.239467121, 1e-8);
  EXPECT_NEAR(green_value(5, std::vector<Coord>(5, 0)).value, 1.1563081248402312, 1e-8);
  EXPECT_NEAR(green_constants(3).return_prob, 0.340537329550999, 1e-8);
}

// G is harmonic off the origin and G(0) = 1 + mean of G at neighbours.
TEST(Green, MeanValueProperty) {
  for (int d : {3, 5}) {
    for (std::vector<Coord> x : {std::vector<Coord>(d, 0), std::vector<Coord>{2, 1, 0, 0, 0}}) {
      x.resize(d);
      double sum = 0;
      for (int i = 0; i < d; ++i)
        for (int s : {-1, 1}) {
          auto y = x;
          y[i] += s;
          sum += green_value(d, y).value;
        }
      bool origin = std::all_of(x.begin(), x.end(), [](Coord c) { return c == 0; });
      EXPECT_NEAR(green_value(d, x).value, (origin ? 1.0 : 0.0) + sum / (2 * d), 1e-8);
    }
  }
}

TEST(Green, Symmetric) {
  std::vector<Coord> a{3, -1, 2}, b{-2, 1, 3};
  EXPECT_NEAR(green_value(3, a).value, green_value(3, b).value, 1e-12);
}

TEST(Green, FarFieldAsymptotics) {
  std::vector<Coord> x{30, 0, 0};
  EXPECT_NEAR(green_value(3, x).value * 30, green_asymptotic_constant(3), 2e-3);
}

TEST(Green, ConstantsConsistent) {
  GreenConstants c = green_constants(5, 6);
  EXPECT_NEAR(c.y0_silt, 1 + 2 * c.m1, 1e-12);
  EXPECT_LE(c.m1_truncated, c.m1 + 1e-9);
  EXPECT_LE(c.m1, c.m1_truncated + c.m1_tail_bound + 1e-9);
  EXPECT_TRUE(std::isinf(green_constants(4).m1));
}

TEST(GreenTable, JsonRoundTrip) {
  GreenTable t = build_green_table(4, 3);
  GreenTable u = GreenTable::from_json(t.to_json());
  std::vector<Coord> x{1, -2, 0, 3};
  EXPECT_DOUBLE_EQ(t.at(x), u.at(x));
  EXPECT_NEAR(t.at(x), green_value(4, x).value, 1e-9);
  std::vector<Coord> far{4, 0, 0, 0};
  EXPECT_THROW(t.at(far), std::out_of_range);
}

TEST(Green, HorizonBound) {
  EXPECT_THROW(intersection_horizon_bound(2, 10), std::invalid_argument);
  EXPECT_TRUE(std::isinf(intersection_horizon_bound(4, 100)));
  double b1 = intersection_horizon_bound(5, 1000), b2 = intersection_horizon_bound(5, 100000);
  EXPECT_GT(b1, b2);
  EXPECT_GT(b2, 0);
}
