#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace softhash::detail {

// Splits [0, total) into contiguous chunks, one worker per chunk. Each index
// is processed exactly once and workers never share output slots, so results
// do not depend on the thread count. threads <= 1 runs inline.
inline void run_chunked(std::size_t total, int threads,
                        const std::function<void(std::size_t, std::size_t)>& body) {
  if (total == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(std::max(threads, 1), total);
  if (workers <= 1) {
    body(0, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (total + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace softhash::detail
