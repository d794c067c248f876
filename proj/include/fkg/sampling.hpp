#pragma once

#include "fkg/lattice.hpp"
#include "fkg/rational.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fkg {

// PRNG identifier stamped into every randomized report. The generator is
// std::mt19937_64 (bit-exact by the standard); bounded draws use masked
// rejection because the standard distributions are not portable; per-trial
// streams are derived with splitmix64.
inline constexpr const char* kPrngId = "mt19937_64/sm64-v1";

std::uint64_t splitmix64(std::uint64_t& state);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform in [0, bound) by masked rejection; bound >= 1.
    std::uint64_t below(std::uint64_t bound);
    int below_int(int bound);

    // Independent generator for trial `stream` of a run seeded with `seed`;
    // trial results are then invariant under work partitioning.
    static Rng for_stream(std::uint64_t seed, std::uint64_t stream);

private:
    std::mt19937_64 gen_;
};

// Uniform over A(m): sample an m-subset of {0..2m-1} (Floyd), sort it
// descending into b, and take a_i = b_i - (m - i).
StaircaseSeq sample_staircase(Rng& rng, int m);

// Corner of a down-rectangle in [0,1]^k; each coordinate num/den with
// den in [1, max_den] and num in [0, den].
std::vector<Rat> sample_rect_corner(Rng& rng, int k, int max_den = 32);

// Arbitrary nonnegative rational cell values in [0, 2].
GridFunction sample_grid_function(Rng& rng, int m, int max_den = 8);

// Nonnegative combination of staircase indicators, hence monotone.
GridFunction sample_monotone_grid_function(Rng& rng, int m);

} // namespace fkg
