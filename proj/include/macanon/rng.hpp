#pragma once

#include <cstdint>

namespace macanon {

// Finalizer from SplitMix64 (Stafford mix13). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// SplitMix64 stream. Used for seed derivation so that correlated seeds
// (e.g. base_seed ^ round_index) decorrelate before reaching a generator.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

// xoshiro256** by Blackman and Vigna. Deterministic across platforms,
// unlike the standard library distributions layered on top of engines.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : s_) word = sm.next();
    }

    std::uint64_t next() {
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

    // Unbiased draw from [0, n) via Lemire's multiply-and-reject method.
    std::uint64_t bounded(std::uint64_t n) {
        using u128 = unsigned __int128;
        u128 product = u128(next()) * n;
        auto low = static_cast<std::uint64_t>(product);
        if (low < n) {
            const std::uint64_t threshold = -n % n;
            while (low < threshold) {
                product = u128(next()) * n;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

}  // namespace macanon
