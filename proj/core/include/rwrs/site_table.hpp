#pragma once

#include <cstdint>
#include <algorithm>
#include <cstring>
#include <span>
#include <vector>

namespace rwrs {

using Coord = std::int32_t;

inline std::uint64_t hash_site(const Coord* c, int d) {
  std::uint64_t h = 0x2545F4914F6CDD1DULL;
  for (int i = 0; i < d; ++i) {
    h ^= static_cast<std::uint32_t>(c[i]);
    h *= 0xFF51AFD7ED558CCDULL;
    h ^= h >> 29;
  }
  h *= 0xC4CEB9FE1A85EC53ULL;
  return h ^ (h >> 32);
}

// Open-addressing counter keyed by d-dimensional integer sites. Keys live in one
// contiguous array, so lookups never allocate and any dimension is exact.
class SiteTable {
 public:
  explicit SiteTable(int dimension, std::size_t expected = 16) : d_(dimension) {
    std::size_t cap = 16;
    while (cap < 2 * expected) cap <<= 1;
    allocate(cap);
  }

  int dimension() const { return d_; }
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return mask_ + 1; }

  // Count after the increment.
  std::uint32_t increment(const Coord* site, std::uint32_t by = 1) {
    if (2 * (size_ + 1) > capacity()) grow();
    std::size_t slot = probe(site);
    if (counts_[slot] == 0) {
      std::memcpy(&keys_[slot * d_], site, sizeof(Coord) * d_);
      ++size_;
    }
    counts_[slot] += by;
    return counts_[slot];
  }

  std::uint32_t count(const Coord* site) const { return counts_[probe(site)]; }

  std::uint32_t increment(std::span<const Coord> site, std::uint32_t by = 1) {
    return increment(site.data(), by);
  }
  std::uint32_t count(std::span<const Coord> site) const { return count(site.data()); }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t s = 0; s <= mask_; ++s) {
      if (counts_[s] != 0) fn(std::span<const Coord>(&keys_[s * d_], d_), counts_[s]);
    }
  }

  void clear() {
    std::fill(counts_.begin(), counts_.end(), 0u);
    size_ = 0;
  }

 private:
  std::size_t probe(const Coord* site) const {
    std::size_t slot = hash_site(site, d_) & mask_;
    const std::size_t bytes = sizeof(Coord) * d_;
    while (counts_[slot] != 0 && std::memcmp(&keys_[slot * d_], site, bytes) != 0) {
      slot = (slot + 1) & mask_;
    }
    return slot;
  }

  void allocate(std::size_t cap) {
    mask_ = cap - 1;
    keys_.assign(cap * d_, 0);
    counts_.assign(cap, 0u);
    size_ = 0;
  }

  void grow() {
    std::vector<Coord> old_keys = std::move(keys_);
    std::vector<std::uint32_t> old_counts = std::move(counts_);
    allocate(2 * (mask_ + 1));
    for (std::size_t s = 0; s < old_counts.size(); ++s) {
      if (old_counts[s] == 0) continue;
      std::size_t slot = probe(&old_keys[s * d_]);
      std::memcpy(&keys_[slot * d_], &old_keys[s * d_], sizeof(Coord) * d_);
      counts_[slot] = old_counts[s];
      ++size_;
    }
  }

  int d_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
  std::vector<Coord> keys_;
  std::vector<std::uint32_t> counts_;
};

}  // namespace rwrs
