#pragma once

#include <cstdint>
#include <stdexcept>

namespace netarch {

/// Identifies one reproducible random stream. A (master_seed, stream_index)
/// pair fully determines every draw made from the stream, so replications
/// can run in parallel on disjoint stream indices and still be replayed
/// one by one.
struct rng_seed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;
};

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

/// xoshiro256** stream, seeded through splitmix64 from an rng_seed.
/// Self-contained so that the produced sequences do not depend on any
/// standard-library distribution implementation.
class rng_stream {
public:
    explicit rng_stream(rng_seed seed) {
        // Distinct stream indices land on distinct splitmix trajectories
        // for a fixed master seed.
        std::uint64_t st = seed.master + 0x9e3779b97f4a7c15ULL * (seed.stream + 1);
        for (auto& word : state_) word = detail::splitmix64_next(st);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    /// Unbiased draw from [0, bound) via rejection.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
        const std::uint64_t threshold = (0 - bound) % bound;
        std::uint64_t x = next_u64();
        while (x < threshold) x = next_u64();
        return x % bound;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1]; used where a logarithm of the draw is taken.
    double uniform01_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::uint64_t state_[4];
};

} // namespace netarch
