#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace collapse::detail {

// Runs fn(trial) for every trial in [0, trials), split contiguously over the
// worker count. fn must write only to per-trial slots; callers merge tallies
// after the join, so results are independent of the split.
template <typename Fn>
void parallel_for_trials(std::uint64_t trials, int threads, const Fn& fn) {
  const int workers =
      static_cast<int>(std::min<std::uint64_t>(std::max(threads, 1), trials));
  if (workers <= 1) {
    for (std::uint64_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t lo = trials * static_cast<std::uint64_t>(w) /
                             static_cast<std::uint64_t>(workers);
    const std::uint64_t hi = trials * (static_cast<std::uint64_t>(w) + 1) /
                             static_cast<std::uint64_t>(workers);
    pool.emplace_back([lo, hi, &fn] {
      for (std::uint64_t t = lo; t < hi; ++t) fn(t);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace collapse::detail
