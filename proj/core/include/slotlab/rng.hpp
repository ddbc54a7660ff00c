#pragma once

#include <cstdint>
#include <stdexcept>

// Deterministic cross-platform randomness.  The generator is SplitMix64:
// a 64-bit counter advanced by the golden-ratio increment with a finalizing
// mix.  Constants are the published ones (increment 0x9E3779B97F4A7C15,
// mixers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB).  All draws and the
// rejection loop in bounded() are integer-only, so a fixed seed yields the
// same stream on every platform and toolchain.

namespace slotlab {

class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform draw from [0, bound) by rejection below the first multiple of
  // bound, so there is no modulo bias.  Requires bound >= 1.
  uint64_t bounded(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("SplitMix64: bound must be >= 1");
    uint64_t min = (0 - bound) % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= min) return r % bound;
    }
  }

  // Derive an independent stream for a labeled purpose.
  SplitMix64 fork(uint64_t label) {
    SplitMix64 mixer(state_ ^ (0xA0761D6478BD642FULL * (label + 1)));
    return SplitMix64(mixer.next());
  }

 private:
  uint64_t state_;
};

}  // namespace slotlab
