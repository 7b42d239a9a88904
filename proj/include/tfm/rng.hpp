#pragma once

#include <cstdint>

namespace tfm {

// Counter-based generator: the stream for (seed, index) is independent of any
// partitioning of the index range, which keeps parallel Monte Carlo runs
// bit-reproducible.
class SampleRng {
  public:
    SampleRng(uint64_t seed, uint64_t index)
        : state_(mix(mix(seed + 0x9E3779B97F4A7C15ull) ^ mix(index + 0xD1B54A32D192ED03ull))) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    uint64_t below(uint64_t n) { return next_u64() % n; }

  private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    uint64_t state_;
};

}  // namespace tfm
