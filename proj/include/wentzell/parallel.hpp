#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace wentzell {

/// Worker cap from the WENTZELL_THREADS environment variable; defaults to 1.
inline int thread_budget() {
  if (const char* env = std::getenv("WENTZELL_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

/// Run body(i) for i in [0, count). Work assignment is by index stride, so
/// results stored per index are identical for any thread count. body must not
/// throw; capture failures into per-index slots instead.
template <typename Body>
void parallel_for_index(int count, const Body& body) {
  const int threads = std::min(thread_budget(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&body, w, count, threads] {
      for (int i = w; i < count; i += threads) body(i);
    });
  for (std::thread& t : pool) t.join();
}

}  // namespace wentzell
