#include "flor/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace flor {
namespace {

int resolve_threads() {
  if (const char* env = std::getenv("FLOR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

int g_threads = 0;  // 0 = unresolved

}  // namespace

int thread_count() {
  if (g_threads <= 0) g_threads = resolve_threads();
  return g_threads;
}

void set_thread_count(int n) { g_threads = n > 0 ? n : resolve_threads(); }

std::size_t chunk_count(std::size_t n, std::size_t chunk) {
  if (n == 0) return 0;
  if (chunk == 0) chunk = 1;
  return (n + chunk - 1) / chunk;
}

void parallel_chunks(
    std::size_t n, std::size_t chunk,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (chunk == 0) chunk = 1;
  const std::size_t nchunks = chunk_count(n, chunk);
  const int workers =
      static_cast<int>(std::min<std::size_t>(thread_count(), nchunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) {
      const std::size_t b = c * chunk;
      fn(c, b, std::min(n, b + chunk));
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= nchunks) break;
      const std::size_t b = c * chunk;
      fn(c, b, std::min(n, b + chunk));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
}

}  // namespace flor
