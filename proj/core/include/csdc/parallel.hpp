#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace csdc {

// Index-keyed parallel for.  Results must be written to preallocated slots
// keyed by i, so aggregation order never depends on scheduling.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned nt = std::min<unsigned>(threads, hw);
  nt = std::min<unsigned>(nt, static_cast<unsigned>(n));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace csdc
