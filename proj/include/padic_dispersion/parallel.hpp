#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace padic {

/// Worker count from PADIC_THREADS, else the hardware concurrency.
inline unsigned default_threads() {
  if (const char* env = std::getenv("PADIC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/**
 * Splits [0, total) into at most `threads` contiguous chunks and runs
 * fn(worker, begin, end) on each. Chunk boundaries depend only on (total, threads);
 * callers that need thread-count-invariant results must merge per-worker state with
 * an order-independent reduction or by chunk index.
 */
template <class Fn>
void parallel_chunks(std::uint64_t total, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  const std::uint64_t workers = std::min<std::uint64_t>(threads, std::max<std::uint64_t>(total, 1));
  if (workers <= 1) {
    fn(0u, std::uint64_t{0}, total);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t begin = total * w / workers;
    const std::uint64_t end = total * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(static_cast<unsigned>(w), begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Evaluates fn(i) for i in [0, n) in parallel; results land at their index.
template <class T, class Fn>
std::vector<T> parallel_map(std::uint64_t n, unsigned threads, Fn&& fn) {
  std::vector<T> out(n);
  parallel_chunks(n, threads, [&](unsigned, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) out[i] = fn(i);
  });
  return out;
}

}  // namespace padic
