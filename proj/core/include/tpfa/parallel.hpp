#ifndef TPFA_PARALLEL_HPP
#define TPFA_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace tpfa {

/// Worker count: min(hardware, TPFA_THREADS) with TPFA_THREADS=0 or unset meaning hardware
inline int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("TPFA_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0 && cap < hw) hw = cap;
  }
  return hw;
}

/// Run fn(begin, end) over fixed chunks of [0, n); chunking is independent of the
/// worker count so that chunked reductions are bitwise reproducible.
template <typename Fn>
void parallel_chunks(long n, const Fn& fn, int chunks = 64) {
  if (n <= 0) return;
  if (static_cast<long>(chunks) > n) chunks = static_cast<int>(n);
  int workers = worker_count();
  if (workers <= 1 || n < 1024) {
    for (int c = 0; c < chunks; ++c)
      fn(c, n * c / chunks, n * (c + 1) / chunks);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int c = next.fetch_add(1);
        if (c >= chunks) return;
        fn(c, n * c / chunks, n * (c + 1) / chunks);
      }
    });
  }
  for (auto& t : pool) t.join();
}

/// Chunked deterministic sum of fn(i) over [0, n)
template <typename Fn>
double parallel_sum(long n, const Fn& fn, int chunks = 64) {
  if (n <= 0) return 0.0;
  if (static_cast<long>(chunks) > n) chunks = static_cast<int>(n);
  std::vector<double> partial(chunks, 0.0);
  parallel_chunks(
      n,
      [&](int c, long b, long e) {
        double s = 0.0;
        for (long i = b; i < e; ++i) s += fn(i);
        partial[c] = s;
      },
      chunks);
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace tpfa

#endif
