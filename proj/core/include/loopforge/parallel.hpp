#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace loopforge {

/// Worker cap: LOOPFORGE_THREADS when set, else hardware concurrency.
/// Results of every parallel kernel must not depend on this value.
inline int worker_count() {
  if (const char* env = std::getenv("LOOPFORGE_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs chunk indices [0, n_chunks) across workers and combines results in
/// chunk order, so the outcome is identical for any worker count.
template <typename Result, typename ChunkFn, typename CombineFn>
Result parallel_chunks(int n_chunks, Result init, ChunkFn chunk_fn, CombineFn combine) {
  int workers = std::min(worker_count(), n_chunks);
  std::vector<Result> partial(n_chunks, init);
  if (workers <= 1) {
    for (int c = 0; c < n_chunks; ++c) partial[c] = chunk_fn(c);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&]() {
        for (int c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
          partial[c] = chunk_fn(c);
      });
    for (auto& th : pool) th.join();
  }
  Result out = init;
  for (int c = 0; c < n_chunks; ++c) out = combine(std::move(out), std::move(partial[c]));
  return out;
}

}  // namespace loopforge
