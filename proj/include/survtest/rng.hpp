#pragma once

#include <cstdint>
#include <random>

namespace survtest {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Counter-based stream: the generator for stream `index` under `seed` is the
// same no matter how many streams were drawn before it or on which thread.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t s = splitmix64(splitmix64(seed) ^ splitmix64(index + 0xA5A5A5A5A5A5A5A5ULL));
    return std::mt19937_64(s);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(seed ^ splitmix64(a)) ^ splitmix64(b + 0x5851F42D4C957F2DULL));
}

}  // namespace survtest
