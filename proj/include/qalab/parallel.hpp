#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace qalab {

inline unsigned worker_count(unsigned requested, std::size_t tasks) {
  unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

/// Evaluates fn(i) for i in [0, count) on a fixed pool; results are stored by
/// index so the output order never depends on scheduling. The first exception
/// thrown by any task is rethrown after all workers finish.
template <class Result>
std::vector<Result> parallel_map(std::size_t count, const std::function<Result(std::size_t)>& fn,
                                 unsigned threads = 0) {
  std::vector<Result> out(count);
  const unsigned workers = worker_count(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace qalab
