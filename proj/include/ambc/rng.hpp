#pragma once

// Deterministic random number generation. Every trial of every sweep point
// gets its own stream derived from (seed, point, trial) so results are
// bit-identical regardless of execution order. xoshiro256++ is used as the
// generator with splitmix64 for state expansion, following the reference
// constructions by Blackman and Vigna.

#include <cmath>
#include <cstdint>

#include "ambc/types.hpp"

namespace ambc {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64_next(sm);
    }

    // Stream for one trial: the three identifiers are mixed through
    // splitmix64 so neighboring (point, trial) pairs decorrelate fully.
    static Rng for_trial(std::uint64_t seed, std::uint64_t point, std::uint64_t trial) {
        std::uint64_t sm = seed;
        sm ^= 0xa0761d6478bd642fULL + splitmix64_next(sm);
        sm ^= point * 0xe7037ed1a0b428dbULL;
        std::uint64_t mixed = splitmix64_next(sm);
        mixed ^= trial * 0x8ebc6af09c88c6e3ULL;
        std::uint64_t sm2 = mixed;
        return Rng(splitmix64_next(sm2));
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

    // Uniform on (0, 1): 53 random bits, then offset so 0 is excluded
    // (log() in the Gaussian draw must never see 0).
    double next_unit() {
        const std::uint64_t bits = next_u64() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    // Standard real Gaussian via Box-Muller. Draws are generated in pairs;
    // the spare is cached.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Circularly symmetric complex Gaussian with E|x|^2 = variance.
    cplx next_cscg(double variance) {
        const double s = std::sqrt(0.5 * variance);
        return {s * next_gaussian(), s * next_gaussian()};
    }

    // Exponential with the given mean.
    double next_exponential(double mean) {
        return -mean * std::log(next_unit());
    }

    // Uniform integer in [0, bound) by rejection; bound must be positive.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    bool next_bit() { return (next_u64() >> 63) != 0; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace ambc
