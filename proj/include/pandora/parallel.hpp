#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pandora {

/// Worker count: PANDORA_WORKERS if set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t default_worker_count();

/// Runs produce(i) for i in [0, count) on up to `workers` threads and hands
/// the results to consume(i, result) strictly in increasing i. The consumed
/// sequence does not depend on the number of workers.
template <class Result, class Produce, class Consume>
void ordered_parallel_for(std::uint64_t count, std::size_t workers, Produce&& produce,
                          Consume&& consume, std::uint64_t block = 512) {
  workers = std::max<std::size_t>(1, workers);
  std::vector<Result> results;
  for (std::uint64_t start = 0; start < count; start += block) {
    const std::uint64_t stop = std::min(count, start + block);
    results.assign(stop - start, Result{});
    if (workers == 1 || stop - start == 1) {
      for (std::uint64_t i = start; i < stop; ++i) results[i - start] = produce(i);
    } else {
      std::atomic<std::uint64_t> next{start};
      std::exception_ptr failure;
      std::mutex failure_mutex;
      auto work = [&] {
        try {
          for (std::uint64_t i = next++; i < stop; i = next++) results[i - start] = produce(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = stop;
        }
      };
      const std::size_t n = std::min<std::size_t>(workers, stop - start);
      std::vector<std::jthread> pool;
      pool.reserve(n);
      for (std::size_t w = 0; w < n; ++w) pool.emplace_back(work);
      pool.clear();
      if (failure) std::rethrow_exception(failure);
    }
    for (std::uint64_t i = start; i < stop; ++i) consume(i, results[i - start]);
  }
}

}  // namespace pandora
