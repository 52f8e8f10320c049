#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "rwrs/lattice_walk.hpp"

using namespace rwrs;

TEST(Walk, StepsAreNearestNeighbour) {
  Trajectory t = simulate_walk(4, 500, 11);
  ASSERT_EQ(t.coords.size(), 501u * 4);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(t.at(0)[i], 0);
  for (std::int64_t k = 1; k <= 500; ++k) {
    int l1 = 0;
    for (int i = 0; i < 4; ++i) l1 += std::abs(t.at(k)[i] - t.at(k - 1)[i]);
    EXPECT_EQ(l1, 1);
  }
}

TEST(Walk, SeedDeterminism) {
  EXPECT_EQ(simulate_walk(3, 200, 5).coords, simulate_walk(3, 200, 5).coords);
  EXPECT_NE(simulate_walk(3, 200, 5).coords, simulate_walk(3, 200, 6).coords);
}

TEST(Walk, DirectionEncoding) {
  std::vector<unsigned> dirs{1, 1, 0, 3, 2};
  Trajectory t = walk_from_directions(2, dirs);
  EXPECT_EQ(t.at(2)[0], 2);
  EXPECT_EQ(t.at(3)[0], 1);
  EXPECT_EQ(t.at(4)[1], 1);
  EXPECT_EQ(t.at(5)[1], 0);
}

TEST(LocalTimes, MassIsNPlusOne) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    LocalTimeField f = local_times(simulate_walk(3, 1000, seed));
    std::int64_t mass = 0;
    for (auto c : f.counts()) mass += c;
    EXPECT_EQ(mass, 1001);
    EXPECT_EQ(f.steps(), 1000);
  }
}

TEST(LocalTimes, StreamingMatchesStored) {
  LocalTimeField a = local_times(simulate_walk(5, 3000, 17));
  LocalTimeField b = simulate_local_times(5, 3000, 17);
  EXPECT_EQ(a.range(), b.range());
  bool same = true;
  a.for_each([&](std::span<const Coord> s, std::int64_t c) { same = same && b.at(s) == c; });
  EXPECT_TRUE(same);
}

TEST(LocalTimes, WindowCounts) {
  Trajectory t = simulate_walk(2, 400, 3);
  LocalTimeField whole = local_times(t), head = local_times(t, 0, 199), tail = local_times(t, 200, 400);
  bool additive = true;
  whole.for_each([&](std::span<const Coord> s, std::int64_t c) { additive = additive && head.at(s) + tail.at(s) == c; });
  EXPECT_TRUE(additive);
}

TEST(OriginLocalTime, JumpMatchesStepwise) {
  const int reps = 4000;
  double a = 0, b = 0, a2 = 0, b2 = 0;
  for (int i = 0; i < reps; ++i) {
    double x = static_cast<double>(origin_local_time(5, 3000, derive_seed(1, i)));
    double y = static_cast<double>(origin_local_time_stepwise(5, 3000, derive_seed(2, i)));
    a += x;
    a2 += x * x;
    b += y;
    b2 += y * y;
  }
  double ma = a / reps, mb = b / reps;
  double se = std::sqrt((a2 / reps - ma * ma + b2 / reps - mb * mb) / reps);
  EXPECT_NEAR(ma, mb, 4 * se);
  EXPECT_GE(ma, 1.0);
}

TEST(OriginLocalTime, ShortHorizons) {
  EXPECT_EQ(origin_local_time(3, 0, 1), 1);
  EXPECT_EQ(origin_local_time(3, 1, 1), 1);
}

TEST(PackedKeys, RadixSortOrders) {
  Trajectory t = simulate_walk(5, 5000, 9);
  std::vector<std::uint64_t> keys;
  ASSERT_TRUE(packed_keys(t, keys));
  std::vector<std::uint64_t> ref = keys;
  std::sort(ref.begin(), ref.end());
  radix_sort(keys);
  EXPECT_EQ(keys, ref);
}

TEST(Box, HalfWidthAndStopping) {
  EXPECT_EQ(box_half_width(3), 1);
  EXPECT_EQ(box_half_width(4), 1);
  EXPECT_EQ(box_half_width(5), 2);
  // 0 -> 1 -> 0 -> -1 -> -2 in d = 1, box of half width 1
  std::vector<unsigned> dirs{1, 0, 0, 0};
  StoppingTimes s = stopping_times(walk_from_directions(1, dirs), 3);
  ASSERT_TRUE(s.sigma.has_value());
  EXPECT_EQ(*s.sigma, 4);
  ASSERT_EQ(s.returns.size(), 1u);
  EXPECT_EQ(s.returns[0], 2);
}
