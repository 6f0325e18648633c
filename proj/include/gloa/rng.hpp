#pragma once

#include <array>
#include <cstdint>

namespace gloa {

namespace detail {

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Seedable, splittable pseudo-random generator (xoshiro256** state,
/// SplitMix64 seeding). Substreams derived from the same root seed are
/// statistically independent and do not depend on how much the parent
/// has already been consumed.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : root_seed_(seed) {
        std::uint64_t x = seed;
        for (auto& w : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            w = detail::mix64(x);
        }
    }

    /// Independent generator keyed by (root seed, stream id).
    SplitRng substream(std::uint64_t id) const {
        return SplitRng(detail::mix64(root_seed_ ^ detail::mix64(id)));
    }

    std::uint64_t root_seed() const { return root_seed_; }

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

    /// Uniform double in [0, 1), 53 significant bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi). Degenerate interval returns lo exactly.
    double uniform(double lo, double hi) {
        return lo + next_double() * (hi - lo);
    }

    /// Uniform integer in [lo, hi], both ends inclusive. Unbiased.
    int uniform_int(int lo, int hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * range;
        auto low = static_cast<std::uint64_t>(m);
        if (low < range) {
            const std::uint64_t threshold = (0 - range) % range;
            while (low < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * range;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return lo + static_cast<int>(m >> 64);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t root_seed_ = 0;
};

} // namespace gloa
