// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace nearfocus {

inline int resolve_thread_count(int requested) {
  if (requested > 0) {
    return requested;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs body(begin, end) over a static partition of [0, count) into contiguous
// chunks, one per worker. Chunk boundaries depend only on count and the
// resolved worker count, and workers write disjoint ranges, so results are
// identical for any thread count as long as body itself is deterministic.
inline void parallel_for(std::int64_t count, int threads,
                         const std::function<void(std::int64_t, std::int64_t)>& body) {
  const int workers = std::min<std::int64_t>(resolve_thread_count(threads), std::max<std::int64_t>(count, 1));
  if (workers <= 1 || count <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::int64_t base = count / workers;
  const std::int64_t extra = count % workers;
  std::int64_t begin = 0;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t size = base + (w < extra ? 1 : 0);
    const std::int64_t end = begin + size;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
    begin = end;
  }
  for (auto& t : pool) {
    t.join();
  }
}

}  // namespace nearfocus
