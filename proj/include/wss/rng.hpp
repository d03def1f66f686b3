#pragma once

#include <cstdint>

namespace wss {

// Deterministic 64-bit generator (splitmix64).  Used wherever reproducible
// pseudo-random structures are needed; the standard library distributions are
// not guaranteed to be identical across platforms, this is.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform-ish draw in [0, n); n must be positive.  The modulo bias is
  // irrelevant for the small n used here.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace wss
