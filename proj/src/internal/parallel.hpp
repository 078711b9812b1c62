#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace featbench::internal {

/// Runs fn(i) for i in [0, count). Work items must not touch shared mutable
/// state; callers sequence any artifact emission themselves afterwards. The
/// first exception thrown by a worker is rethrown once all workers finish.
inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (jobs <= 0) {
    jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
  }
  if (jobs == 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  std::vector<std::thread> threads;
  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  threads.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Computes results in parallel one chunk at a time, then hands them to the
/// single writer in index order. Memory stays bounded by the chunk size and
/// artifact emission order never depends on the degree of parallelism.
template <typename Result>
void chunked_parallel(std::size_t count, int jobs,
                      const std::function<Result(std::size_t)>& compute,
                      const std::function<void(std::size_t, Result&)>& write) {
  int degree = jobs;
  if (degree <= 0) {
    degree = static_cast<int>(std::thread::hardware_concurrency());
    if (degree <= 0) degree = 1;
  }
  const std::size_t chunk_size = static_cast<std::size_t>(degree);
  for (std::size_t base = 0; base < count; base += chunk_size) {
    const std::size_t chunk = std::min(chunk_size, count - base);
    std::vector<Result> results(chunk);
    parallel_for(chunk, degree,
                 [&](std::size_t k) { results[k] = compute(base + k); });
    for (std::size_t k = 0; k < chunk; ++k) write(base + k, results[k]);
  }
}

}  // namespace featbench::internal
