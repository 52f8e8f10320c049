#pragma once

#include <cstdint>

namespace rwrs {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream seed for replica `index` under `master`. Independent of how replicas
// are scheduled across workers.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master + kGolden) ^ (index * 0xD6E8FEB86659FD93ULL + 0x632BE59BD9B4E019ULL));
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(master, a), b);
}

// (0, 1), never exactly 0 or 1.
inline double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  double uniform() { return to_unit(next()); }

  // Lemire's multiply-shift with rejection; exact.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t x = next();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      std::uint64_t threshold = -bound % bound;
      while (low < threshold) {
        x = next();
        m = static_cast<unsigned __int128>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::uint64_t state() const { return state_; }

  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next(); }

 private:
  std::uint64_t state_;
};

// Uniform draws on {0..bound-1} peeled off one 64-bit word: the k-th draw is
// the k-th base-`bound` digit of word / 2^64. Powers of two are exact; other
// bounds take k draws with bound^k <= 2^24, so each digit pattern has relative
// bias below 2^-40.
class DigitSource {
 public:
  DigitSource(std::uint64_t seed, unsigned bound) : rng_(seed), bound_(bound) {
    unsigned twos = static_cast<unsigned>(__builtin_ctz(bound));
    if ((bound & (bound - 1)) == 0) {
      per_word_ = twos == 0 ? 1 : static_cast<int>(64 / twos);
    } else {
      per_word_ = 0;
      for (std::uint64_t p = bound; p <= (1ULL << 24); p *= bound) ++per_word_;
    }
    if (per_word_ > 16) per_word_ = 16;
    if (per_word_ < 1) per_word_ = 1;
  }

  unsigned draw() {
    if (left_ == 0) {
      word_ = rng_.next();
      left_ = per_word_;
    }
    --left_;
    unsigned __int128 m = static_cast<unsigned __int128>(word_) * bound_;
    word_ = static_cast<std::uint64_t>(m);
    return static_cast<unsigned>(m >> 64);
  }

  SplitMix64& engine() { return rng_; }

 private:
  SplitMix64 rng_;
  unsigned bound_;
  int per_word_ = 1;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

}  // namespace rwrs
