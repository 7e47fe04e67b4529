// Deterministic substream derivation. Every trial/purpose gets its own engine
// seeded from a splitmix64 hash of (master seed, trial, stream id, purpose),
// so results do not depend on thread scheduling.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace linbandit::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix(std::initializer_list<std::uint64_t> words) {
    std::uint64_t state = 0x6a09e667f3bcc909ULL;  // arbitrary nonzero start
    std::uint64_t h = splitmix64(state);
    for (std::uint64_t w : words) {
        state ^= w;
        h ^= splitmix64(state);
        h = (h << 23) | (h >> 41);
    }
    return h;
}

// Purposes keep independent streams independent even for the same trial.
enum : std::uint64_t {
    kPurposeTheta = 1,
    kPurposeNoise = 2,
    kPurposeAction = 3,
};

inline std::mt19937_64 substream(std::uint64_t master, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    return std::mt19937_64(mix({master, a, b, c}));
}

}  // namespace linbandit::rng
