#include "sgalab/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

namespace sgalab {

int max_threads() {
  const char* env = std::getenv("SGALAB_THREADS");
  if (env == nullptr) return 1;
  const int requested = std::atoi(env);
  if (requested <= 1) return 1;
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  return std::min(requested, std::max(1, hw));
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  const int threads = std::min(max_threads(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sgalab
