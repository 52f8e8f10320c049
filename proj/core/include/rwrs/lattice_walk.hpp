#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rwrs/rng.hpp"
#include "rwrs/site_table.hpp"

namespace rwrs {

// Positions S_0..S_n stored flat, (n + 1) * d coordinates.
struct Trajectory {
  int dimension = 0;
  std::int64_t steps = 0;
  std::uint64_t seed = 0;
  std::vector<Coord> coords;

  const Coord* site(std::int64_t k) const { return coords.data() + k * dimension; }
  std::span<const Coord> at(std::int64_t k) const {
    return {coords.data() + k * dimension, static_cast<std::size_t>(dimension)};
  }
};

// Streaming simple random walk. Direction index i moves axis i / 2 by +1 when
// i is odd and -1 when even.
class WalkStepper {
 public:
  WalkStepper(int dimension, std::uint64_t seed);

  unsigned step() {
    unsigned dir = digits_.draw();
    pos_[dir >> 1] += (dir & 1u) ? 1 : -1;
    ++time_;
    return dir;
  }

  const Coord* position() const { return pos_.data(); }
  std::span<const Coord> site() const { return pos_; }
  int dimension() const { return d_; }
  std::int64_t time() const { return time_; }

 private:
  int d_;
  DigitSource digits_;
  std::vector<Coord> pos_;
  std::int64_t time_ = 0;
};

Trajectory simulate_walk(int dimension, std::int64_t steps, std::uint64_t seed);

// Walk built from explicit direction indices (same encoding as WalkStepper).
Trajectory walk_from_directions(int dimension, std::span<const unsigned> directions);

// l(x) = #{k in window : S_k = x}. For a whole path the mass is n + 1.
class LocalTimeField {
 public:
  explicit LocalTimeField(int dimension, std::size_t expected = 16)
      : table_(dimension, expected) {}

  void visit(const Coord* site) {
    table_.increment(site);
    ++mass_;
  }
  // Count after the visit.
  std::uint32_t visit_count(const Coord* site) {
    ++mass_;
    return table_.increment(site);
  }

  int dimension() const { return table_.dimension(); }
  std::int64_t mass() const { return mass_; }
  std::int64_t steps() const { return mass_ - 1; }
  std::size_t range() const { return table_.size(); }
  std::int64_t at(std::span<const Coord> site) const { return table_.count(site.data()); }
  std::int64_t at(const Coord* site) const { return table_.count(site); }

  template <class Fn>
  void for_each(Fn&& fn) const {
    table_.for_each([&](std::span<const Coord> s, std::uint32_t c) {
      fn(s, static_cast<std::int64_t>(c));
    });
  }

  std::vector<std::int64_t> counts() const;
  const SiteTable& table() const { return table_; }

 private:
  SiteTable table_;
  std::int64_t mass_ = 0;
};

LocalTimeField local_times(const Trajectory& path);
// Visits at times first..last inclusive.
LocalTimeField local_times(const Trajectory& path, std::int64_t first, std::int64_t last);
// Same law and same seed stream as local_times(simulate_walk(...)), no path kept.
LocalTimeField simulate_local_times(int dimension, std::int64_t steps, std::uint64_t seed);

std::size_t range_size(const LocalTimeField& field);

// l_n(0) for a walk started at 0. From L1 distance D the origin cannot be hit
// within D - 1 steps, so those steps are drawn at once as a multinomial
// displacement; the law of l_n(0) is exact. Cost is about O(sqrt(n)) jumps.
std::int64_t origin_local_time(int dimension, std::int64_t steps, std::uint64_t seed);
// Plain step-by-step version of the same quantity.
std::int64_t origin_local_time_stepwise(int dimension, std::int64_t steps, std::uint64_t seed);

// One 64-bit key per site, 64 / d bits per coordinate. Returns false (and
// leaves `keys` partial) if some coordinate does not fit.
bool packed_keys(const Trajectory& path, std::vector<std::uint64_t>& keys);
// LSD radix sort on 16-bit digits.
void radix_sort(std::vector<std::uint64_t>& keys);

// Box ]-r/2, r/2[^d realized on the lattice as |x_i| <= floor((r - 1) / 2).
int box_half_width(double r);
bool inside_box(const Coord* site, int dimension, int half_width);

struct StoppingTimes {
  int half_width = 0;
  std::optional<std::int64_t> sigma;  // first k with S_k outside the box
  std::vector<std::int64_t> returns;  // T_0^(1) < T_0^(2) < ...
};

StoppingTimes stopping_times(const Trajectory& path, double r);

}  // namespace rwrs
