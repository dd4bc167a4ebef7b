#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qcs {

inline unsigned default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

/// Runs body(begin, end, worker_id) over contiguous chunks of [0, n). Chunks
/// are claimed dynamically; the first exception thrown by any worker is
/// rethrown on the calling thread after all workers stop.
template <class Body>
void parallel_chunks(std::size_t n, unsigned workers, std::size_t chunk, Body&& body) {
  if (n == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  workers = std::max(1u, workers);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  if (workers == 1 || n_chunks == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      body(c * chunk, std::min(n, (c + 1) * chunk), 0u);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&](unsigned id) {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) return;
      try {
        body(c * chunk, std::min(n, (c + 1) * chunk), id);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n_chunks));
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (unsigned id = 0; id < used; ++id) pool.emplace_back(run, id);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace qcs
