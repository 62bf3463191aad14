#pragma once

#include <cstdint>

namespace testutil {

// Deterministic generator so every suite is reproducible.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed = 0)
        : state(seed * 6364136223846793005ULL + 1442695040888963407ULL) {}
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    long long below(long long n) { return static_cast<long long>(next() % static_cast<std::uint64_t>(n)); }
    long long in(long long lo, long long hi) { return lo + below(hi - lo + 1); }
};

}  // namespace testutil
