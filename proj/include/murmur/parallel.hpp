#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace murmur {

/// 0 means "use the machine's parallelism".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Calls fn(i) for every i in [0, n). Work is split into contiguous blocks,
/// one per thread; results must be written to per-index slots so the outcome
/// does not depend on the schedule. The exception from the lowest block wins.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Deterministic reduction: [0, n) is cut into fixed chunks of `chunk`
/// indices (independent of the thread count), each chunk is reduced by
/// map_chunk(begin, end), and the partials are folded left to right with
/// combine. Floating-point results are therefore identical for any thread
/// count.
template <class T, class MapChunk, class Combine>
T deterministic_reduce(std::size_t n, std::size_t chunk, unsigned threads, T init,
                       MapChunk&& map_chunk, Combine&& combine) {
  if (chunk == 0) chunk = 1;
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<T> partial(chunks, init);
  parallel_for(chunks, threads, [&](std::size_t c) {
    partial[c] = map_chunk(c * chunk, std::min(n, (c + 1) * chunk));
  });
  T acc = std::move(init);
  for (auto& p : partial) acc = combine(std::move(acc), std::move(p));
  return acc;
}

}  // namespace murmur
