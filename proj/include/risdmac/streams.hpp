#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

namespace risdmac {

// Trials are grouped into fixed-size blocks and every block owns an engine
// seeded from (seed, block index). Block boundaries do not depend on the
// worker count, so any schedule produces the same per-block results.
inline constexpr std::uint64_t kTrialsPerBlock = 4096;

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream_index);

/// Resolves a requested worker count; 0 means hardware concurrency.
unsigned resolve_workers(unsigned requested);

/// Runs body(engine, first_trial, end_trial) once per block and returns the
/// block results in block order. Blocks are handed to `workers` threads in a
/// fixed round-robin assignment; callers reduce the returned vector
/// sequentially, which keeps floating-point sums schedule-independent.
template <class Result, class Body>
std::vector<Result> run_blocks(std::uint64_t n_trials, std::uint64_t seed, unsigned workers,
                               Body body) {
  const std::uint64_t n_blocks = (n_trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<Result> results(n_blocks);
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(n_blocks, 1)));

  auto work = [&](unsigned tid) {
    for (std::uint64_t b = tid; b < n_blocks; b += n_threads) {
      auto rng = substream(seed, b);
      const std::uint64_t first = b * kTrialsPerBlock;
      const std::uint64_t last = std::min(n_trials, first + kTrialsPerBlock);
      results[b] = body(rng, first, last);
    }
  };

  if (n_threads <= 1) {
    work(0);
    return results;
  }
  std::vector<std::exception_ptr> errors(n_threads);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        work(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace risdmac
