#pragma once

#include <cstdint>

namespace primegen {

// 64-bit finalizer (splitmix64 style). Good avalanche, cheap, and stable
// across platforms, which is what we need for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-realization seed: a stable hash of (master_seed, pool_max, n_values,
// realization index). Every realization gets its own stream, so ensemble
// results do not depend on how work is split across threads.
constexpr std::uint64_t substream_seed(std::uint64_t master_seed,
                                       std::uint64_t pool_max,
                                       std::uint64_t n_values,
                                       std::uint64_t index) noexcept {
    std::uint64_t h = mix64(master_seed);
    h = mix64(h ^ pool_max);
    h = mix64(h ^ n_values);
    h = mix64(h ^ index);
    return h;
}

// xoshiro256** with Lemire's unbiased bounded draw. Hand-rolled rather than
// <random> because std::uniform_int_distribution is implementation-defined:
// identical seeds would give different pools on different standard libraries,
// and reproducibility across toolchains is a hard requirement here.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) noexcept {
        // Expand the seed through splitmix64. The expansion is a bijection
        // per word with distinct increments folded in, so the all-zero
        // state (the one invalid xoshiro state) cannot occur.
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform draw from [0, bound), bound >= 1, without modulo bias.
    std::uint32_t below(std::uint32_t bound) noexcept {
        std::uint64_t x = next() >> 32;
        std::uint64_t m = x * bound;
        auto low = static_cast<std::uint32_t>(m);
        if (low < bound) {
            const std::uint32_t threshold = (0u - bound) % bound;
            while (low < threshold) {
                x = next() >> 32;
                m = x * bound;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    // Uniform draw from [lo, hi], inclusive on both ends.
    std::uint32_t range(std::uint32_t lo, std::uint32_t hi) noexcept {
        return lo + below(hi - lo + 1);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace primegen
