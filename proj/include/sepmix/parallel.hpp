#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <thread>
#include <vector>

namespace sepmix {

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(state, trial) for trial = 0..trials-1 on the given number of
// workers, then merges each worker state exactly once. Per-trial results must
// depend only on the trial index and merges must commute (integer counters),
// which makes the reduction independent of the worker count.
template <typename MakeState, typename Body, typename Merge>
void run_trials(uint64_t trials, int workers, MakeState make, Body body, Merge merge) {
  workers = resolve_workers(workers);
  if (trials == 0) return;
  if (workers <= 1 || trials == 1) {
    auto state = make();
    for (uint64_t i = 0; i < trials; ++i) body(state, i);
    merge(state);
    return;
  }
  std::atomic<uint64_t> next{0};
  std::mutex merge_mutex;
  constexpr uint64_t kChunk = 32;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      auto state = make();
      for (;;) {
        uint64_t lo = next.fetch_add(kChunk);
        if (lo >= trials) break;
        uint64_t hi = std::min(trials, lo + kChunk);
        for (uint64_t i = lo; i < hi; ++i) body(state, i);
      }
      std::lock_guard<std::mutex> lock(merge_mutex);
      merge(state);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sepmix
