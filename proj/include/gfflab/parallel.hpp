#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gfflab {

// Runs body(i) for i in [0, count) on up to `workers` threads. Results must be written by index,
// so the outcome never depends on scheduling.
inline void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int t = static_cast<int>(std::min<std::size_t>(count, static_cast<std::size_t>(workers)));
  for (int w = 0; w < t; ++w) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

template <class T>
std::vector<T> parallel_map(std::size_t count, int workers, const std::function<T(std::size_t)>& body) {
  std::vector<T> out(count);
  parallel_for(count, workers, [&](std::size_t i) { out[i] = body(i); });
  return out;
}

}  // namespace gfflab
