#include "rwrs/silt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rwrs {

namespace {

std::int64_t pairs(std::int64_t l) { return l * (l - 1) / 2; }

bool same_site(const Coord* a, const Coord* b, int d) {
  for (int i = 0; i < d; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace

double silt_power(const LocalTimeField& field, double p) {
  double s = 0;
  field.for_each([&](std::span<const Coord>, std::int64_t l) { s += std::pow(static_cast<double>(l), p); });
  return s;
}

std::int64_t silt(const LocalTimeField& field) {
  std::int64_t s = 0;
  field.for_each([&](std::span<const Coord>, std::int64_t l) { s += l * l; });
  return s;
}

std::int64_t coincidence_pairs(const LocalTimeField& field) {
  std::int64_t s = 0;
  field.for_each([&](std::span<const Coord>, std::int64_t l) { s += pairs(l); });
  return s;
}

std::int64_t coincidence_pairs_scan(const Trajectory& path) {
  if (path.steps > 20000) throw std::invalid_argument("quadratic scan limited to n <= 20000");
  std::int64_t c = 0;
  for (std::int64_t k = 0; k <= path.steps; ++k)
    for (std::int64_t j = k + 1; j <= path.steps; ++j)
      if (same_site(path.site(k), path.site(j), path.dimension)) ++c;
  return c;
}

std::int64_t coincidence_pairs_sorted(const Trajectory& path) {
  const int d = path.dimension;
  std::vector<std::int64_t> idx(static_cast<std::size_t>(path.steps + 1));
  std::iota(idx.begin(), idx.end(), 0);
  auto less = [&](std::int64_t a, std::int64_t b) {
    return std::lexicographical_compare(path.site(a), path.site(a) + d, path.site(b), path.site(b) + d);
  };
  std::sort(idx.begin(), idx.end(), less);
  std::int64_t c = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i + 1;
    while (j < idx.size() && same_site(path.site(idx[i]), path.site(idx[j]), d)) ++j;
    c += pairs(static_cast<std::int64_t>(j - i));
    i = j;
  }
  return c;
}

std::int64_t silt_sorted(const Trajectory& path) {
  std::vector<std::uint64_t> keys;
  if (!packed_keys(path, keys)) return silt(local_times(path));
  radix_sort(keys);
  std::int64_t s = 0;
  std::size_t i = 0;
  while (i < keys.size()) {
    std::size_t j = i + 1;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    auto l = static_cast<std::int64_t>(j - i);
    s += l * l;
    i = j;
  }
  return s;
}

double LevelSet::sum_pow(double p) const {
  double s = 0;
  for (std::int64_t l : local_times) s += std::pow(static_cast<double>(l), p);
  return s;
}

LevelSet level_set(const LocalTimeField& field, double b_low, double b_high) {
  if (!(b_low >= 0) || !(b_high > b_low)) throw std::invalid_argument("level set needs 0 <= b_low < b_high");
  LevelSet ls;
  ls.dimension = field.dimension();
  ls.steps = field.steps();
  ls.b_low = b_low;
  ls.b_high = b_high;
  const double n = static_cast<double>(field.steps());
  const double lo = b_low == 0 ? 1.0 : std::pow(n, b_low);
  const bool capped = b_high < 1;
  const double hi = std::pow(n, b_high);
  field.for_each([&](std::span<const Coord> s, std::int64_t l) {
    double v = static_cast<double>(l);
    if (v < lo) return;
    if (capped && !(v < hi)) return;
    ls.coords.insert(ls.coords.end(), s.begin(), s.end());
    ls.local_times.push_back(l);
  });
  return ls;
}

std::int64_t low_level_coincidences(const LocalTimeField& field, double b) {
  const double cut = std::pow(static_cast<double>(field.steps()), b);
  std::int64_t z = 0;
  field.for_each([&](std::span<const Coord>, std::int64_t l) {
    if (static_cast<double>(l) <= cut) z += pairs(l);
  });
  return z;
}

DyadicDecomposition dyadic_decompose(const Trajectory& path, double b) {
  const std::int64_t n = path.steps;
  if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("dyadic decomposition needs n = 2^N with N >= 1");
  const int d = path.dimension;
  DyadicDecomposition dd;
  dd.levels = std::countr_zero(static_cast<std::uint64_t>(n));
  dd.b = b;
  dd.steps = n;
  dd.half = n / 2;
  dd.threshold = std::pow(static_cast<double>(n), b);
  const std::int64_t h = dd.half;
  const double cut = dd.threshold;

  LocalTimeField whole = local_times(path);
  LocalTimeField first = local_times(path, 0, h);
  LocalTimeField second = local_times(path, h, n);

  whole.for_each([&](std::span<const Coord> x, std::int64_t l) {
    if (static_cast<double>(l) <= cut) dd.z0 += pairs(l);
    std::int64_t lh = first.at(x);
    std::int64_t m = second.at(x);
    std::int64_t after = l - lh;  // visits in (h, n]
    if (lh > 0 && static_cast<double>(lh) <= cut) {
      dd.z1 += pairs(lh);
      dd.j1 += lh * m;
    }
    if (m > 0 && static_cast<double>(after) <= cut) dd.z2 += pairs(m);
  });

  dd.midpoint.assign(path.site(h), path.site(h) + d);
  dd.strand1 = LocalTimeField(d, static_cast<std::size_t>(h + 1));
  dd.strand2 = LocalTimeField(d, static_cast<std::size_t>(h + 1));
  std::vector<Coord> z(d);
  for (std::int64_t k = 0; k <= h; ++k) {
    for (int i = 0; i < d; ++i) z[i] = dd.midpoint[i] - path.site(h - k)[i];
    dd.strand1.visit(z.data());
    for (int i = 0; i < d; ++i) z[i] = dd.midpoint[i] - path.site(h + k)[i];
    dd.strand2.visit(z.data());
  }
  dd.strand1.for_each([&](std::span<const Coord> s, std::int64_t l1) {
    if (static_cast<double>(l1) > cut) return;
    dd.j1_strands += l1 * dd.strand2.at(s);
    if (l1 >= 2) dd.strand_square_sum += l1 * l1;
  });
  return dd;
}

std::int64_t two_walk_intersection(int dimension, std::int64_t steps, std::uint64_t seed1, std::uint64_t seed2) {
  std::vector<std::uint64_t> a, b;
  if (!packed_keys(simulate_walk(dimension, steps, seed1), a) || !packed_keys(simulate_walk(dimension, steps, seed2), b))
    return two_walk_intersection_hashed(dimension, steps, seed1, seed2);
  radix_sort(a);
  radix_sort(b);
  std::int64_t total = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      std::uint64_t key = a[i];
      std::int64_t ca = 0, cb = 0;
      while (i < a.size() && a[i] == key) ++i, ++ca;
      while (j < b.size() && b[j] == key) ++j, ++cb;
      total += ca * cb;
    }
  }
  return total;
}

std::int64_t two_walk_intersection_hashed(int dimension, std::int64_t steps, std::uint64_t seed1,
                                          std::uint64_t seed2) {
  LocalTimeField first = simulate_local_times(dimension, steps, seed1);
  WalkStepper w(dimension, seed2);
  const SiteTable& t = first.table();
  std::int64_t total = t.count(w.position());
  for (std::int64_t k = 1; k <= steps; ++k) {
    w.step();
    total += t.count(w.position());
  }
  return total;
}

std::vector<std::int64_t> two_walk_intersection_profile(int dimension, std::span<const std::int64_t> horizons,
                                                        std::uint64_t seed1, std::uint64_t seed2) {
  std::int64_t last = 0;
  for (std::int64_t h : horizons) {
    if (h < last) throw std::invalid_argument("horizons must be non-decreasing");
    last = h;
  }
  WalkStepper a(dimension, seed1), b(dimension, seed2);
  SiteTable ta(dimension, static_cast<std::size_t>(last + 1)), tb(dimension, static_cast<std::size_t>(last + 1));
  ta.increment(a.position());
  tb.increment(b.position());
  std::int64_t value = 1;
  std::vector<std::int64_t> out;
  std::size_t next = 0;
  for (std::int64_t k = 0;; ++k) {
    while (next < horizons.size() && horizons[next] == k) {
      out.push_back(value);
      ++next;
    }
    if (next == horizons.size()) break;
    a.step();
    b.step();
    bool meet = same_site(a.position(), b.position(), dimension);
    value += tb.count(a.position()) + ta.count(b.position()) + (meet ? 1 : 0);
    ta.increment(a.position());
    tb.increment(b.position());
  }
  return out;
}

InterpolationCheck interpolation_check(std::span<const std::int64_t> counts, std::int64_t steps, double p, double q) {
  if (!(p > 1) || !(q > p)) throw std::invalid_argument("interpolation needs 1 < p < q");
  InterpolationCheck c;
  c.p = p;
  c.q = q;
  const double ps = p / (p - 1), qs = q / (q - 1);
  c.a = 1 - qs / ps;
  std::int64_t mass = 0;
  double sp = 0, sq = 0;
  for (std::int64_t l : counts) {
    mass += l;
    sp += std::pow(static_cast<double>(l), p);
    sq += std::pow(static_cast<double>(l), q);
  }
  const double total = static_cast<double>(steps + 1);
  const double tol = 1e-12;
  c.mass_ok = mass == steps + 1;
  c.holder_lhs = std::log(sp) / p;
  c.holder_rhs = c.a * std::log(total) + (1 - c.a) / q * std::log(sq);
  c.holder_ok = c.holder_lhs <= c.holder_rhs + tol * (1 + std::abs(c.holder_rhs));
  const double r = static_cast<double>(counts.size());
  c.power_lhs = p * std::log(total / r);
  c.power_rhs = std::log(sp / r);
  c.power_ok = c.power_lhs <= c.power_rhs + tol * (1 + std::abs(c.power_rhs));
  return c;
}

InterpolationCheck interpolation_check(const LocalTimeField& field, double p, double q) {
  std::vector<std::int64_t> c = field.counts();
  return interpolation_check(c, field.steps(), p, q);
}

}  // namespace rwrs
