#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace subring {

/// Search limits. Zero means unlimited.
struct SearchBudget {
  std::uint64_t max_steps = 0;
  double max_seconds = 0.0;
};

/// The search stopped before covering its whole space; any partial result
/// is discarded.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step accounting shared by all workers of one search.
class StepCounter {
 public:
  explicit StepCounter(SearchBudget budget)
      : budget_(budget), start_(std::chrono::steady_clock::now()) {}

  void tick() {
    const std::uint64_t n = steps_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (budget_.max_steps != 0 && n > budget_.max_steps)
      throw BudgetExceeded("search budget of " + std::to_string(budget_.max_steps) +
                           " steps exhausted; result incomplete");
    if (budget_.max_seconds > 0 && (n & 0xfff) == 0) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
      if (elapsed.count() > budget_.max_seconds)
        throw BudgetExceeded("wall-time ceiling exceeded; result incomplete");
    }
  }

  std::uint64_t steps() const { return steps_.load(std::memory_order_relaxed); }

 private:
  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<std::uint64_t> steps_{0};
};

/// Runs fn(shard) for every shard in [0, shard_count) on `jobs` threads and
/// returns the results indexed by shard, so the output does not depend on the
/// thread count. The first failing shard (by index) rethrows.
template <class Result, class Fn>
std::vector<Result> run_sharded(std::size_t shard_count, std::size_t jobs, Fn&& fn) {
  std::vector<Result> results(shard_count);
  std::vector<std::exception_ptr> errors(shard_count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (;;) {
      const std::size_t shard = next.fetch_add(1);
      if (shard >= shard_count || failed.load()) return;
      try {
        results[shard] = fn(shard);
      } catch (...) {
        errors[shard] = std::current_exception();
        failed.store(true);
      }
    }
  };

  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(shard_count, 1));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace subring
