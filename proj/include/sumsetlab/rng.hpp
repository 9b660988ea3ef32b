#pragma once

#include <array>
#include <cstdint>

namespace sumsetlab {

// SplitMix64 (Vigna). One multiply/xor-shift mix per output; used for seed
// expansion and for deriving independent per-trial stream keys.
struct SplitMix64 {
    std::uint64_t state = 0;

    constexpr std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

// First output of SplitMix64 started at `x`.
constexpr std::uint64_t splitmix64(std::uint64_t x) { return SplitMix64{x}.next(); }

// xoshiro256** 1.0 (Blackman & Vigna), state expanded from the seed with
// SplitMix64 so that every 64-bit seed, including 0, is valid.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& word : state_) word = sm.next();
    }

    std::uint64_t next_u64() {
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

    // Uniform in [0,1), 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Consumes exactly one draw regardless of p, so streams generated with
    // different p but the same seed are coupled monotonically.
    bool bernoulli(double p) { return next_unit() < p; }

    // Uniform integer in [0, bound), bound >= 1. Lemire multiply-shift with
    // rejection, so the result is exactly uniform.
    std::uint64_t bounded(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

}  // namespace sumsetlab
