#pragma once

#include <cmath>
#include <cstdint>

namespace stepwell {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// xoshiro256++; each Monte Carlo path gets its own stream seeded from
// (seed, path index) via splitmix64, so results do not depend on how paths are
// scheduled across workers.
class Xoshiro256pp {
public:
    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed ^ (0xA0761D6478BD642Full * (stream + 1));
        for (auto& word : s_) word = splitmix64(sm);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
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

    // Uniform on (0, 1); never returns 0.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::uint64_t s_[4];
};

// Box-Muller pairs drawn on demand.
class NormalSource {
public:
    NormalSource(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_uniform();
        const double u2 = rng_.next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    Xoshiro256pp rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace stepwell
