#pragma once

#include <cstdint>

namespace sepmix {

// Counter-derived generator: the state sequence is a pure function of
// (seed, stream), so trial streams indexed by trial number reproduce
// bit-identically regardless of how trials are assigned to workers.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream)
      : state_(mix(mix(seed + kGolden) ^ mix(stream + 0x1d8af4f3c9e2b4c5ULL))) {}

  uint64_t next_u64() {
    state_ += kGolden;
    return mix(state_);
  }

  // Unbiased draw from [0, n), Lemire multiply-with-rejection.
  uint64_t next_below(uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<uint64_t>(m);
    if (lo < n) {
      uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  uint64_t state_;
};

}  // namespace sepmix
