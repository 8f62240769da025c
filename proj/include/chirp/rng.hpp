#pragma once

#include <cstdint>

namespace chirp {

// splitmix64. Fixed as the shuffle generator so heterogeneous
// implementations produce bit-identical permutations from a shared seed.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    uint64_t state_;
};

/// One-way combination of a seed with a salt, for deriving independent
/// sub-streams (per-agent, per-cycle) from a single scenario seed.
inline uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    SplitMix64 g(seed ^ (salt + 0x9E3779B97F4A7C15ull));
    return g.next();
}

}  // namespace chirp
