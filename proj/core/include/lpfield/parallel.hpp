#ifndef LPFIELD_PARALLEL_HPP
#define LPFIELD_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace lpfield {

// Work is split into fixed-size blocks handed out atomically, so the set of
// floating-point operations per output slot does not depend on the thread
// count. Only loops with disjoint writes may go through parallel_for;
// reductions stay sequential (or combine fixed-order block partials).

void set_thread_count(int n);
int thread_count();

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t block = 1024) {
  const int threads = thread_count();
  if (threads <= 1 || n <= block) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      const std::size_t lo = b * block;
      if (lo >= n) return;
      const std::size_t hi = std::min(n, lo + block);
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads) - 1);
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace lpfield

#endif
