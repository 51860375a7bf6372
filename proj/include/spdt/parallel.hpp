#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace spdt {

// Runs fn(i, worker) for i in [0, n_tasks) across `workers` threads, where
// `worker` identifies the owning thread (for per-worker scratch buffers).
// Tasks must be independent and write only to slots owned by their index;
// results are then identical for every worker count, which is what the
// determinism guarantee rests on. Static contiguous sharding, no stealing.
template <typename Fn>
void parallel_for_workers(std::size_t n_tasks, int workers, Fn&& fn) {
  if (workers < 1) throw std::invalid_argument("parallel_for: workers must be >= 1");
  if (n_tasks == 0) return;
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n_tasks);
  if (w == 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(w);
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t lo = n_tasks * t / w;
    const std::size_t hi = n_tasks * (t + 1) / w;
    pool.emplace_back([&, lo, hi, t] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

// Worker-oblivious variant.
template <typename Fn>
void parallel_for(std::size_t n_tasks, int workers, Fn&& fn) {
  parallel_for_workers(n_tasks, workers, [&fn](std::size_t i, std::size_t) { fn(i); });
}

}  // namespace spdt
