#include "fkg/sampling.hpp"

#include "fkg/errors.hpp"

#include <algorithm>
#include <bit>

namespace fkg {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw InputError("rng: zero bound");
    if (bound == 1) return 0;
    const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
    for (;;) {
        const std::uint64_t r = next() & mask;
        if (r < bound) return r;
    }
}

int Rng::below_int(int bound) {
    if (bound <= 0) throw InputError("rng: nonpositive bound");
    return static_cast<int>(below(static_cast<std::uint64_t>(bound)));
}

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed;
    const std::uint64_t base = splitmix64(state);
    state = base ^ stream;
    return Rng(splitmix64(state));
}

StaircaseSeq sample_staircase(Rng& rng, int m) {
    if (m < 1) throw InputError("sample: resolution must be positive");
    const int total = 2 * m;
    // Floyd: for j = total-m .. total-1 pick t in [0, j]; take t unless
    // already taken, else take j. Yields a uniform m-subset of {0..total-1}.
    std::vector<bool> taken(static_cast<std::size_t>(total), false);
    for (int j = total - m; j < total; ++j) {
        const int t = rng.below_int(j + 1);
        if (taken[static_cast<std::size_t>(t)]) {
            taken[static_cast<std::size_t>(j)] = true;
        } else {
            taken[static_cast<std::size_t>(t)] = true;
        }
    }
    std::vector<int> b;
    b.reserve(static_cast<std::size_t>(m));
    for (int v = total - 1; v >= 0; --v) {
        if (taken[static_cast<std::size_t>(v)]) b.push_back(v);
    }
    std::vector<int> a(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
        a[static_cast<std::size_t>(i - 1)] = b[static_cast<std::size_t>(i - 1)] - (m - i);
    }
    return StaircaseSeq(m, std::move(a));
}

std::vector<Rat> sample_rect_corner(Rng& rng, int k, int max_den) {
    if (k < 1) throw InputError("sample: dimension must be positive");
    if (max_den < 1) throw InputError("sample: max denominator must be positive");
    std::vector<Rat> corner;
    corner.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        const int den = 1 + rng.below_int(max_den);
        const int num = rng.below_int(den + 1);
        corner.push_back(make_rat(num, den));
    }
    return corner;
}

GridFunction sample_grid_function(Rng& rng, int m, int max_den) {
    if (m < 1) throw InputError("sample: resolution must be positive");
    if (max_den < 1) throw InputError("sample: max denominator must be positive");
    std::vector<Rat> values;
    values.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int c = 0; c < m * m; ++c) {
        const int den = 1 + rng.below_int(max_den);
        const int num = rng.below_int(2 * den + 1);
        values.push_back(make_rat(num, den));
    }
    return GridFunction(m, std::move(values));
}

GridFunction sample_monotone_grid_function(Rng& rng, int m) {
    const int layers = 1 + rng.below_int(3);
    GridFunction f = GridFunction::constant(m, Rat(0));
    for (int t = 0; t < layers; ++t) {
        const int den = 1 + rng.below_int(4);
        const int num = rng.below_int(2 * den + 1);
        const StaircaseSeq a = sample_staircase(rng, m);
        f = f + GridFunction::from_staircase(a).scaled(make_rat(num, den));
    }
    return f;
}

} // namespace fkg
