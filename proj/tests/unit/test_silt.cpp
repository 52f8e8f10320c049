#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rwrs/silt.hpp"

using namespace rwrs;

// sum l^2 = (n + 1) + 2 #{k < k' : S_k = S_k'} on every path.
TEST(Silt, PairIdentityOnRandomPaths) {
  for (int d : {1, 2, 3, 5})
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      Trajectory t = simulate_walk(d, 1500, derive_seed(seed, d));
      LocalTimeField f = local_times(t);
      std::int64_t pairs = coincidence_pairs_scan(t);
      EXPECT_EQ(silt(f), 1501 + 2 * pairs);
      EXPECT_EQ(coincidence_pairs(f), pairs);
      EXPECT_EQ(coincidence_pairs_sorted(t), pairs);
      EXPECT_EQ(silt_sorted(t), silt(f));
    }
}

TEST(Silt, PowerAgreesWithExact) {
  LocalTimeField f = local_times(simulate_walk(3, 800, 2));
  EXPECT_NEAR(silt_power(f, 2), static_cast<double>(silt(f)), 1e-6);
  EXPECT_NEAR(silt_power(f, 1), 801, 1e-9);
}

TEST(Silt, BacktrackPath) {
  std::vector<unsigned> dirs{1, 0, 1, 0};
  LocalTimeField f = local_times(walk_from_directions(1, dirs));
  EXPECT_EQ(silt(f), 9 + 4);
  EXPECT_EQ(coincidence_pairs(f), 4);
}

TEST(Silt, SortedFallsBackWhenKeysOverflow) {
  // 64 / 8 = 8 bits per coordinate; a straight run of 300 steps leaves that range
  std::vector<unsigned> dirs(300, 1);
  dirs.insert(dirs.end(), 300, 0);
  Trajectory t = walk_from_directions(8, dirs);
  std::vector<std::uint64_t> keys;
  EXPECT_FALSE(packed_keys(t, keys));
  EXPECT_EQ(silt_sorted(t), silt(local_times(t)));
}

TEST(LevelSet, Partition) {
  LocalTimeField f = local_times(simulate_walk(2, 4000, 4));
  LevelSet low = level_set(f, 0, 0.3), high = level_set(f, 0.3, 1);
  EXPECT_EQ(low.size() + high.size(), f.range());
  EXPECT_NEAR(low.sum_pow(1) + high.sum_pow(1), 4001, 1e-9);
  double cut = std::pow(4000.0, 0.3);
  for (auto l : low.local_times) EXPECT_LT(l, cut);
  for (auto l : high.local_times) EXPECT_GE(l, cut);
}

TEST(LevelSet, LowCoincidences) {
  LocalTimeField f = local_times(simulate_walk(3, 3000, 6));
  std::int64_t expect = 0;
  double cut = std::pow(3000.0, 0.4);
  f.for_each([&](std::span<const Coord>, std::int64_t l) {
    if (l <= cut) expect += l * (l - 1) / 2;
  });
  EXPECT_EQ(low_level_coincidences(f, 0.4), expect);
  EXPECT_EQ(low_level_coincidences(f, 1), coincidence_pairs(f));
}

TEST(Dyadic, DecompositionInvariants) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Trajectory t = simulate_walk(3, 1024, seed);
    for (double b : {0.2, 0.5}) {
      DyadicDecomposition dd = dyadic_decompose(t, b);
      EXPECT_EQ(dd.levels, 10);
      EXPECT_EQ(dd.half, 512);
      EXPECT_EQ(dd.j1, dd.j1_strands);
      EXPECT_LE(dd.z0, dd.z1 + dd.z2 + dd.j1);
      EXPECT_LE(dd.strand_square_sum, 4 * dd.z1);
      EXPECT_EQ(dd.strand1.mass(), 513);
      EXPECT_EQ(dd.strand2.mass(), 513);
    }
  }
  EXPECT_THROW(dyadic_decompose(simulate_walk(2, 100, 1), 0.5), std::invalid_argument);
}

TEST(Intersection, SortedMatchesHashed) {
  for (int d : {3, 5})
    for (std::uint64_t s = 1; s <= 4; ++s)
      EXPECT_EQ(two_walk_intersection(d, 2000, s, s + 100), two_walk_intersection_hashed(d, 2000, s, s + 100));
}

TEST(Intersection, ProfileIsMonotoneAndMatches) {
  std::vector<std::int64_t> h{0, 10, 100, 1000};
  auto prof = two_walk_intersection_profile(5, h, 3, 4);
  ASSERT_EQ(prof.size(), h.size());
  EXPECT_EQ(prof[0], 1);
  for (std::size_t i = 1; i < prof.size(); ++i) EXPECT_GE(prof[i], prof[i - 1]);
  EXPECT_EQ(prof.back(), two_walk_intersection(5, 1000, 3, 4));
}

TEST(Interpolation, HolderAndPowerMean) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    LocalTimeField f = local_times(simulate_walk(3, 1024, seed));
    for (auto [p, q] : {std::pair{1.5, 2.0}, {2.0, 3.0}, {2.5, 4.0}}) EXPECT_TRUE(interpolation_check(f, p, q).ok());
  }
  std::vector<std::int64_t> bad{2, 2};
  EXPECT_FALSE(interpolation_check(bad, 4, 2, 3).mass_ok);
}
