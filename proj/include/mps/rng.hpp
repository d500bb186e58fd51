#pragma once

#include <cstdint>

// Deterministic counter-based randomness. Every random decision in the
// library is a pure function of (seed, role, ids...), so sequential and
// round-based executions can replay the exact same draws.

namespace mps::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
    return splitmix64(seed ^ splitmix64(salt ^ 0x5851f42d4c957f2dull));
}

template <typename... Rest>
std::uint64_t derive(std::uint64_t seed, std::uint64_t salt, Rest... rest) {
    return derive(derive(seed, salt), rest...);
}

// Uniform double in [0,1), 53 significant bits.
inline double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Small sequential stream for generators that draw several values.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double next_unit() { return to_unit(next()); }

    // Uniform integer in [lo, hi] (inclusive); unbiased enough for test inputs.
    long long next_int(long long lo, long long hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(next() % span);
    }

private:
    std::uint64_t state_;
};

// Salts separating the independent random roles of one run seed.
inline constexpr std::uint64_t kSaltEdge = 0xE0;
inline constexpr std::uint64_t kSaltWeight = 0xE1;
inline constexpr std::uint64_t kSaltLevel = 0xC0;
inline constexpr std::uint64_t kSaltFtSample = 0xF0;
inline constexpr std::uint64_t kSaltFtInner = 0xF1;

}  // namespace mps::rng
