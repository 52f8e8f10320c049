#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rwrs/lattice_walk.hpp"

namespace rwrs {

// sum_x l(x)^p
double silt_power(const LocalTimeField& field, double p);
// sum_x l(x)^2, exact
std::int64_t silt(const LocalTimeField& field);
// #{k < k' : S_k = S_k'} = sum_x C(l(x), 2)
std::int64_t coincidence_pairs(const LocalTimeField& field);
// Independent routes for the same count: direct O(n^2) scan (n <= 20000) and
// lexicographic sort of the visited positions.
std::int64_t coincidence_pairs_scan(const Trajectory& path);
std::int64_t coincidence_pairs_sorted(const Trajectory& path);
// sum_x l(x)^2 through radix-sorted packed sites; hash table if keys overflow.
std::int64_t silt_sorted(const Trajectory& path);

// Sites with n^{b_low} <= l(x) < n^{b_high}; b_high >= 1 removes the upper cut.
struct LevelSet {
  int dimension = 0;
  std::int64_t steps = 0;
  double b_low = 0, b_high = 1;
  std::vector<Coord> coords;
  std::vector<std::int64_t> local_times;

  std::size_t size() const { return local_times.size(); }
  double sum_pow(double p) const;
};

LevelSet level_set(const LocalTimeField& field, double b_low, double b_high);

// sum over {x : l(x) <= n^b} of C(l(x), 2)
std::int64_t low_level_coincidences(const LocalTimeField& field, double b);

// Split of a path of length n = 2^N at h = 2^{N-1} into the strands
// S_h - S_{h-k} and S_h - S_{h+k}, k = 0..h. Pair counts are over time pairs
// k < k'; the second half uses times h..n and its level condition uses visits
// in (h, n].
struct DyadicDecomposition {
  int levels = 0;
  double b = 0;
  std::int64_t steps = 0, half = 0;
  double threshold = 0;     // n^b
  std::int64_t z0 = 0;      // pairs in [0, n] on {l_n <= n^b}
  std::int64_t z1 = 0;      // pairs in [0, h] on {l_h <= n^b}
  std::int64_t z2 = 0;      // pairs in [h, n] on {l_n - l_h <= n^b}
  std::int64_t j1 = 0;      // l_h * (visits in [h, n]) on {l_h <= n^b}
  std::int64_t j1_strands = 0;   // same quantity from the strand fields
  std::int64_t strand_square_sum = 0;  // sum of l_{h,1}^2 over {2 <= l_{h,1} <= n^b}
  LocalTimeField strand1{1}, strand2{1};
  std::vector<Coord> midpoint;
};

DyadicDecomposition dyadic_decompose(const Trajectory& path, double b);

// I_n = sum_x l_n(x) l~_n(x) for independent walks from the origin.
// Sort-and-merge on packed sites, falling back to the hashed route.
std::int64_t two_walk_intersection(int dimension, std::int64_t steps, std::uint64_t seed1, std::uint64_t seed2);
std::int64_t two_walk_intersection_hashed(int dimension, std::int64_t steps, std::uint64_t seed1,
                                          std::uint64_t seed2);
// I at each horizon (non-decreasing horizons), both walks truncated there.
std::vector<std::int64_t> two_walk_intersection_profile(int dimension, std::span<const std::int64_t> horizons,
                                                        std::uint64_t seed1, std::uint64_t seed2);

// Holder interpolation of sum l^p between sum l = n + 1 and sum l^q with
// weight a = 1 - q*/p*, and the power-mean bound ((n+1)/|R|)^p <= sum l^p / |R|.
struct InterpolationCheck {
  double p = 0, q = 0, a = 0;
  bool mass_ok = false;  // sum l == n + 1
  double holder_lhs = 0, holder_rhs = 0;  // logs
  bool holder_ok = false;
  double power_lhs = 0, power_rhs = 0;    // logs
  bool power_ok = false;
  bool ok() const { return mass_ok && holder_ok && power_ok; }
};

InterpolationCheck interpolation_check(std::span<const std::int64_t> counts, std::int64_t steps, double p, double q);
InterpolationCheck interpolation_check(const LocalTimeField& field, double p, double q);

}  // namespace rwrs
