#pragma once

#include <cstdint>

namespace diracfk {

/// Counter-based stream: draw k of stream s is a pure function of (s, k).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t stream) : stream_(stream) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() { return mix(mix(stream_) ^ counter_++); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace diracfk
