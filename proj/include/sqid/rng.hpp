#pragma once

#include <cstdint>
#include <cmath>

// Deterministic, splittable pseudo-randomness. Monte-Carlo loops derive
// one substream per sample index from (seed, index), so results do not
// depend on worker count or iteration order.

namespace sqid {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        have_gauss_ = false;
    }

    /// Substream derived from (seed, stream id); streams are independent
    /// for all practical purposes.
    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed ^ (0x5851f42d4c957f2dULL * (stream + 1));
        return Rng(splitmix64(sm));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    /// Standard normal, Box-Muller (platform-stable, unlike
    /// std::normal_distribution).
    double gaussian() {
        if (have_gauss_) {
            have_gauss_ = false;
            return cached_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(phi);
        have_gauss_ = true;
        return r * std::cos(phi);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool have_gauss_;
};

}  // namespace sqid
