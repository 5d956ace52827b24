#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace rainbow {

// Floating-point threshold comparisons. Thresholds are products like nu*n whose
// exact value may sit on an integer boundary; the guard keeps 0.25*8 == 2 stable.
inline constexpr double kThresholdGuard = 1e-9;

inline bool approx_ge(double lhs, double rhs) { return lhs >= rhs - kThresholdGuard; }
inline bool approx_le(double lhs, double rhs) { return lhs <= rhs + kThresholdGuard; }

// Smallest integer >= x, guarded against representation noise in products.
inline int ceil_threshold(double x) { return static_cast<int>(std::ceil(x - kThresholdGuard)); }
inline int floor_threshold(double x) { return static_cast<int>(std::floor(x + kThresholdGuard)); }

// splitmix64, used to derive independent RNG streams from (seed, stream-id).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(mix_seed(seed, stream));
}

// FNV-1a over bytes; used for input digests in run manifests.
inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace rainbow
