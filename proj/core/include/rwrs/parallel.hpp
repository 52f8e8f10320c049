#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rwrs {

// RWRS_WORKERS overrides the hardware concurrency.
inline unsigned default_workers() {
  if (const char* env = std::getenv("RWRS_WORKERS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

inline constexpr std::uint64_t kReplicaBlock = 64;

// Runs body(i, acc) for i in [0, count). Replicas are grouped in fixed blocks
// reduced in index order, so the result does not depend on the worker count.
// Acc needs a default constructor and merge(const Acc&).
template <class Acc, class Body>
Acc replica_reduce(std::uint64_t count, Body&& body, unsigned workers = default_workers()) {
  const std::uint64_t blocks = (count + kReplicaBlock - 1) / kReplicaBlock;
  std::vector<Acc> partial(blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto run = [&] {
    for (;;) {
      std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        std::uint64_t hi = std::min(count, (b + 1) * kReplicaBlock);
        for (std::uint64_t i = b * kReplicaBlock; i < hi; ++i) body(i, partial[b]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
      }
    }
  };
  unsigned n_threads = workers == 0 ? 1 : workers;
  if (n_threads > blocks) n_threads = static_cast<unsigned>(blocks == 0 ? 1 : blocks);
  if (n_threads <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  Acc total;
  for (auto& p : partial) total.merge(p);
  return total;
}

// Count, mean and M2 with Chan's merge.
struct MeanAccumulator {
  std::uint64_t count = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    ++count;
    double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const MeanAccumulator& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    double n = static_cast<double>(count + o.count);
    double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.count) / n;
    m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / n;
    count += o.count;
  }

  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double std_err() const { return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

}  // namespace rwrs
