#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace microcover {

// Runs body(i) for i < count on up to `threads` workers. Work is split into
// fixed contiguous chunks, so anything written per index is independent of
// the thread count. The first exception (lowest index) is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = count * w / workers;
      const std::size_t end = count * (w + 1) / workers;
      for (std::size_t i = begin; i < end; ++i) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace microcover
