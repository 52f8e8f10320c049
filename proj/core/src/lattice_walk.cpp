#include "rwrs/lattice_walk.hpp"

#include <algorithm>
#include <cstdlib>
#include <boost/random/binomial_distribution.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rwrs {

namespace {

void check_dimension(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1, got " + std::to_string(d));
}

void check_steps(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("step count must be >= 0, got " + std::to_string(n));
}

}  // namespace

WalkStepper::WalkStepper(int dimension, std::uint64_t seed)
    : d_(dimension), digits_(seed, 2u * static_cast<unsigned>(dimension < 1 ? 1 : dimension)),
      pos_(static_cast<std::size_t>(dimension < 1 ? 1 : dimension), 0) {
  check_dimension(dimension);
}

Trajectory simulate_walk(int dimension, std::int64_t steps, std::uint64_t seed) {
  check_dimension(dimension);
  check_steps(steps);
  Trajectory t;
  t.dimension = dimension;
  t.steps = steps;
  t.seed = seed;
  t.coords.assign(static_cast<std::size_t>((steps + 1) * dimension), 0);
  WalkStepper w(dimension, seed);
  Coord* out = t.coords.data();
  for (std::int64_t k = 1; k <= steps; ++k) {
    w.step();
    out += dimension;
    std::copy(w.position(), w.position() + dimension, out);
  }
  return t;
}

Trajectory walk_from_directions(int dimension, std::span<const unsigned> directions) {
  check_dimension(dimension);
  Trajectory t;
  t.dimension = dimension;
  t.steps = static_cast<std::int64_t>(directions.size());
  t.coords.assign((directions.size() + 1) * dimension, 0);
  for (std::size_t k = 0; k < directions.size(); ++k) {
    unsigned dir = directions[k];
    if (dir >= 2u * static_cast<unsigned>(dimension)) throw std::invalid_argument("direction out of range");
    Coord* next = t.coords.data() + (k + 1) * dimension;
    std::copy(next - dimension, next, next);
    next[dir >> 1] += (dir & 1u) ? 1 : -1;
  }
  return t;
}

std::vector<std::int64_t> LocalTimeField::counts() const {
  std::vector<std::int64_t> out;
  out.reserve(range());
  for_each([&](std::span<const Coord>, std::int64_t c) { out.push_back(c); });
  return out;
}

LocalTimeField local_times(const Trajectory& path) {
  return local_times(path, 0, path.steps);
}

LocalTimeField local_times(const Trajectory& path, std::int64_t first, std::int64_t last) {
  if (first < 0 || last > path.steps || first > last) throw std::out_of_range("time window outside path");
  LocalTimeField f(path.dimension, static_cast<std::size_t>(last - first + 1));
  for (std::int64_t k = first; k <= last; ++k) f.visit(path.site(k));
  return f;
}

LocalTimeField simulate_local_times(int dimension, std::int64_t steps, std::uint64_t seed) {
  check_dimension(dimension);
  check_steps(steps);
  LocalTimeField f(dimension, static_cast<std::size_t>(steps + 1));
  WalkStepper w(dimension, seed);
  f.visit(w.position());
  for (std::int64_t k = 1; k <= steps; ++k) {
    w.step();
    f.visit(w.position());
  }
  return f;
}

std::size_t range_size(const LocalTimeField& field) { return field.range(); }

std::int64_t origin_local_time(int dimension, std::int64_t steps, std::uint64_t seed) {
  check_dimension(dimension);
  check_steps(steps);
  const int d = dimension;
  SplitMix64 rng(seed);
  std::vector<std::int64_t> pos(d, 0), axis_count(d);
  std::int64_t dist = 0, visits = 1, k = 0;
  while (k < steps) {
    // below a few dozen steps single moves are cheaper than a multinomial
    std::int64_t jump = dist < 24 ? 1 : std::min(dist, steps - k);
    if (jump == 1) {
      auto dir = static_cast<unsigned>(rng.below(2 * d));
      std::int64_t& p = pos[dir >> 1];
      dist -= std::abs(p);
      p += (dir & 1u) ? 1 : -1;
      dist += std::abs(p);
    } else {
      // axis counts ~ Multinomial(jump, 1/d each), then a fair +/- split per axis
      std::int64_t left = jump;
      for (int a = 0; a < d; ++a) {
        if (a == d - 1) {
          axis_count[a] = left;
        } else {
          boost::random::binomial_distribution<std::int64_t> bin(left, 1.0 / (d - a));
          axis_count[a] = bin(rng);
        }
        left -= axis_count[a];
      }
      dist = 0;
      for (int a = 0; a < d; ++a) {
        if (axis_count[a] > 0) {
          boost::random::binomial_distribution<std::int64_t> half(axis_count[a], 0.5);
          pos[a] += 2 * half(rng) - axis_count[a];
        }
        dist += std::abs(pos[a]);
      }
    }
    k += jump;
    if (dist == 0) ++visits;
  }
  return visits;
}

std::int64_t origin_local_time_stepwise(int dimension, std::int64_t steps, std::uint64_t seed) {
  check_dimension(dimension);
  check_steps(steps);
  DigitSource digits(seed, 2u * static_cast<unsigned>(dimension));
  std::int32_t pos[64] = {};
  int nonzero = 0;
  std::int64_t visits = 1;
  for (std::int64_t k = 0; k < steps; ++k) {
    unsigned dir = digits.draw();
    std::int32_t before = pos[dir >> 1];
    std::int32_t after = before + ((dir & 1u) ? 1 : -1);
    pos[dir >> 1] = after;
    nonzero += (after != 0) - (before != 0);
    visits += nonzero == 0;
  }
  return visits;
}

bool packed_keys(const Trajectory& path, std::vector<std::uint64_t>& keys) {
  const int d = path.dimension;
  const int bits = 64 / d;
  const std::int64_t bias = bits >= 63 ? (std::int64_t{1} << 62) : (std::int64_t{1} << (bits - 1));
  const std::int64_t limit = bias - 1;
  keys.resize(static_cast<std::size_t>(path.steps + 1));
  for (std::int64_t k = 0; k <= path.steps; ++k) {
    const Coord* s = path.site(k);
    std::uint64_t key = 0;
    for (int i = 0; i < d; ++i) {
      if (s[i] > limit || s[i] < -limit) return false;
      key = (bits >= 64 ? 0 : key << bits) | static_cast<std::uint64_t>(s[i] + bias);
    }
    keys[static_cast<std::size_t>(k)] = key;
  }
  return true;
}

void radix_sort(std::vector<std::uint64_t>& keys) {
  std::vector<std::uint64_t> buf(keys.size());
  std::uint64_t all_or = 0;
  for (auto k : keys) all_or |= k;
  for (int shift = 0; shift < 64; shift += 16) {
    if ((all_or >> shift) == 0) break;
    std::vector<std::size_t> count(65537, 0);
    for (auto k : keys) ++count[((k >> shift) & 0xFFFF) + 1];
    for (std::size_t i = 1; i < count.size(); ++i) count[i] += count[i - 1];
    for (auto k : keys) buf[count[(k >> shift) & 0xFFFF]++] = k;
    keys.swap(buf);
  }
}

int box_half_width(double r) {
  if (!(r > 0)) throw std::invalid_argument("box size must be positive");
  return static_cast<int>(std::floor((r - 1.0) / 2.0));
}

bool inside_box(const Coord* site, int dimension, int half_width) {
  for (int i = 0; i < dimension; ++i) {
    if (site[i] > half_width || site[i] < -half_width) return false;
  }
  return true;
}

StoppingTimes stopping_times(const Trajectory& path, double r) {
  StoppingTimes st;
  st.half_width = box_half_width(r);
  const int d = path.dimension;
  for (std::int64_t k = 0; k <= path.steps; ++k) {
    const Coord* s = path.site(k);
    if (!st.sigma && !inside_box(s, d, st.half_width)) st.sigma = k;
    if (k > 0) {
      bool origin = true;
      for (int i = 0; i < d && origin; ++i) origin = s[i] == 0;
      if (origin) st.returns.push_back(k);
    }
  }
  return st;
}

}  // namespace rwrs
