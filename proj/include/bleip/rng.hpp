#pragma once

#include <cstdint>

#include "bleip/types.hpp"

namespace bleip {

/// PCG32 with an explicit stream selector. The same (seed, stream) pair
/// produces the same draw sequence on every platform, and streams are
/// independent so adding a node does not perturb the draws of other nodes.
class Rng {
public:
    Rng() : Rng(0, 0) {}

    Rng(std::uint64_t seed, std::uint64_t stream)
        : state_(0), inc_((stream << 1u) | 1u)
    {
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32()
    {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted =
            static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    std::uint64_t next_u64()
    {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform draw from [lo, hi], both ends inclusive. Debiased via
    /// Lemire's multiply-shift rejection.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi)
    {
        if (lo > hi) throw SimError("uniform: lo > hi");
        std::uint64_t range = hi - lo;  // draws from [0, range]
        if (range == UINT64_MAX) return next_u64();
        std::uint64_t bound = range + 1;
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        std::uint64_t low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return lo + static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

/// Draw a duration uniformly from [lo, hi] inclusive.
inline Dur uniform_range(Rng& rng, Dur lo, Dur hi)
{
    return rng.uniform(lo, hi);
}

}  // namespace bleip
