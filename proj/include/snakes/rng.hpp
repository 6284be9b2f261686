#pragma once

#include <cstdint>

namespace snakes {

/// splitmix64 step; used for seeding and for deriving per-replica streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/**
 * Rng — xoshiro256++ generator.
 *
 * One instance per worker; never shared across threads. Streams for
 * parallel replicas are derived from (master seed, stream index) through
 * splitmix64 so that any replica can be regenerated independently of
 * scheduling order.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x853c49e6748fea9bULL) { reseed(seed); }

    /// Stream `index` of the generator family keyed by `master`.
    static Rng stream(std::uint64_t master, std::uint64_t index) {
        std::uint64_t s = master;
        (void)splitmix64(s);
        s ^= 0xd1342543de82ef95ULL * (index + 1);
        return Rng(splitmix64(s));
    }

    void reseed(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
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

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as input to logs and inverse tails.
    double next_double_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) without modulo bias (Lemire).
    std::uint64_t next_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ULL; }
    result_type operator()() { return next_u64(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

} // namespace snakes
