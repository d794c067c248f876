#pragma once

// Reference values computed straight from cell counts and permutation
// enumeration, kept independent of the library's oracle tables and
// partition backends so the two sides can disagree.

#include "fkg/lattice.hpp"
#include "fkg/rational.hpp"

#include <algorithm>
#include <span>
#include <vector>

namespace ref {

using fkg::GridFunction;
using fkg::Rat;
using fkg::StaircaseSeq;

// E(prod_{l in idx} chi_{a^l}): row i of the intersection holds min_l a^l_i
// cells, so the measure is the sum of the row minima over m^2.
inline Rat moment(std::span<const StaircaseSeq> fs, std::span<const int> idx) {
    const int m = fs[0].m();
    long cells = 0;
    for (int i = 1; i <= m; ++i) {
        int level = m;
        for (const int l : idx) level = std::min(level, fs[static_cast<std::size_t>(l)].value(i));
        cells += level;
    }
    return Rat(cells) / Rat(static_cast<long>(m) * m);
}

inline Rat moment(std::span<const GridFunction> fs, std::span<const int> idx) {
    const int m = fs[0].m();
    Rat sum(0);
    for (std::size_t c = 0; c < static_cast<std::size_t>(m) * m; ++c) {
        Rat prod(1);
        for (const int l : idx) prod *= fs[static_cast<std::size_t>(l)].cell(c);
        sum += prod;
    }
    return sum / Rat(static_cast<long>(m) * m);
}

template <typename F>
Rat expect_one(const F& f) {
    const int idx[] = {0};
    return moment(std::span<const F>(&f, 1), idx);
}

// Literal two-argument formula E(fg) - E(f)E(g).
template <typename F>
Rat e2(const F& f, const F& g) {
    const std::vector<F> fs = {f, g};
    const int both[] = {0, 1}, first[] = {0}, second[] = {1};
    return moment(std::span<const F>(fs), both) - moment(std::span<const F>(fs), first) *
                                                      moment(std::span<const F>(fs), second);
}

// Literal five-term expansion over S_3:
//   2E(fgh) - E(fg)E(h) - E(fh)E(g) - E(gh)E(f) + E(f)E(g)E(h).
template <typename F>
Rat e3(const F& f, const F& g, const F& h) {
    const std::vector<F> fs = {f, g, h};
    const std::span<const F> s(fs);
    const int i0[] = {0}, i1[] = {1}, i2[] = {2};
    const int i01[] = {0, 1}, i02[] = {0, 2}, i12[] = {1, 2};
    const int i012[] = {0, 1, 2};
    return Rat(2) * moment(s, i012) - moment(s, i01) * moment(s, i2) -
           moment(s, i02) * moment(s, i1) - moment(s, i12) * moment(s, i0) +
           moment(s, i0) * moment(s, i1) * moment(s, i2);
}

// Literal third joint cumulant:
//   E(fgh) + 2E(f)E(g)E(h) - E(f)E(gh) - E(g)E(fh) - E(h)E(fg).
template <typename F>
Rat kappa3(const F& f, const F& g, const F& h) {
    const std::vector<F> fs = {f, g, h};
    const std::span<const F> s(fs);
    const int i0[] = {0}, i1[] = {1}, i2[] = {2};
    const int i01[] = {0, 1}, i02[] = {0, 2}, i12[] = {1, 2};
    const int i012[] = {0, 1, 2};
    return moment(s, i012) + Rat(2) * moment(s, i0) * moment(s, i1) * moment(s, i2) -
           moment(s, i0) * moment(s, i12) - moment(s, i1) * moment(s, i02) -
           moment(s, i2) * moment(s, i01);
}

// Signed sum over every permutation of {0..n-1}, cycles found by walking
// each orbit with a visited array, moments taken straight from cell counts.
template <typename F>
Rat en_bruteforce(std::span<const F> fs) {
    const int n = static_cast<int>(fs.size());
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    Rat total(0);
    do {
        std::vector<bool> visited(static_cast<std::size_t>(n), false);
        int cycle_count = 0;
        Rat prod(1);
        for (int start = 0; start < n; ++start) {
            if (visited[static_cast<std::size_t>(start)]) continue;
            ++cycle_count;
            std::vector<int> orbit;
            int cur = start;
            while (!visited[static_cast<std::size_t>(cur)]) {
                visited[static_cast<std::size_t>(cur)] = true;
                orbit.push_back(cur);
                cur = perm[static_cast<std::size_t>(cur)];
            }
            prod *= moment(fs, std::span<const int>(orbit));
        }
        if (cycle_count % 2 == 1) {
            total += prod;
        } else {
            total -= prod;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

} // namespace ref
