#pragma once

#include <cstdint>

namespace polyfun {

/* Deterministic splitmix64 generator. Uses no standard-library distributions,
 * so identical seeds give identical streams on every platform and compiler.
 *
 * Stream splitting: trial k of a suite running under seed s draws from
 * Rng(split_stream(s, suite_id, k)); suites never share or reuse streams, so
 * reordering or parallelising trials cannot change any trial's data. */
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /* uniform in [lo, hi], inclusive; Lemire reduction without rejection
     * (bias is irrelevant here, determinism is not) */
    int range(int lo, int hi) {
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        uint64_t r = next();
        unsigned __int128 m = static_cast<unsigned __int128>(r) * span;
        return lo + static_cast<int>(m >> 64);
    }

    bool coin() { return (next() & 1) != 0; }

  private:
    uint64_t state_;
};

inline uint64_t split_stream(uint64_t seed, uint64_t suite_id, uint64_t trial) {
    Rng mix(seed ^ (0xD1B54A32D192ED03ull * (suite_id + 1)));
    uint64_t base = mix.next();
    Rng mix2(base ^ (0x9E3779B97F4A7C15ull * (trial + 1)));
    return mix2.next();
}

}  // namespace polyfun
