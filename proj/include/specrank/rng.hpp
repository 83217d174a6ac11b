#pragma once

#include <cmath>
#include <cstdint>

namespace specrank {

// Seed expander (Steele, Lea & Flood 2014). Also used as the mixing
// function behind substream derivation.
struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

/// Counter-based substream seed: for a fixed master seed the map
/// index -> seed is injective (odd multiplier, bijective finalizer),
/// so replication streams never collide.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 sm{master + 0x9E3779B97F4A7C15ull * (index + 1)};
    return sm.next();
}

/// xoshiro256++ stream with Box-Muller normal sampling. One instance per
/// replication; instances derived from (master, index) are independent,
/// which is what makes serial and parallel runs produce identical output.
class RngStream {
public:
    RngStream(std::uint64_t master, std::uint64_t index)
        : RngStream(derive_stream_seed(master, index)) {}

    explicit RngStream(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& word : state_) word = sm.next();
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on (0, 1]; never 0, so log() below is safe.
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the spare variate is cached.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        constexpr double two_pi = 6.283185307179586476925286766559;
        const double radius = std::sqrt(-2.0 * std::log(next_unit()));
        const double angle = two_pi * next_unit();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Rademacher sign, -1.0 or +1.0.
    double next_sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace specrank
