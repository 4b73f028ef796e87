#pragma once

// Pinned pseudo-random streams.
//
// Stream derivation (version 1, stable): replica i of master seed s is a
// xoshiro256** generator whose four state words are the first four outputs of
// SplitMix64 seeded with mix64(mix64(s) + i), where mix64 is the SplitMix64
// output finaliser. Uniform doubles take the top 53 bits. Nothing here
// depends on <random> distributions, so streams are identical on every
// platform and standard library.

#include <cstdint>

namespace memwalk {

__extension__ using uint128 = unsigned __int128;

inline constexpr int kStreamVersion = 1;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}
    constexpr std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit constexpr Xoshiro256(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    constexpr result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) by 128-bit multiply-shift.
    constexpr std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>((static_cast<uint128>((*this)()) * bound) >> 64);
    }

    /// +1 with probability prob, -1 otherwise.
    constexpr int rademacher(double prob) { return uniform() < prob ? 1 : -1; }

    constexpr bool fair_bit() { return ((*this)() >> 63) != 0; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4]{};
};

using Rng = Xoshiro256;

/// Master seed of an ensemble; replica streams are pure functions of
/// (master_seed, replica).
struct SeedSpec {
    std::uint64_t master_seed = 0;

    constexpr Rng stream(std::uint64_t replica) const {
        return Rng(mix64(mix64(master_seed) + replica));
    }
};

}  // namespace memwalk
