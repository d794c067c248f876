#pragma once

#include "fkg/lattice.hpp"
#include "fkg/rational.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fkg {

// Index subsets B of {1..n} encoded as n-bit masks, bit i-1 <-> index i.
using SubsetMask = std::uint32_t;

// Provider of exact E(prod_{i in B} f^i) for every nonempty B of {1..n}.
// The full moment table (2^n - 1 entries) is built eagerly at construction,
// so lookups are lock-free const reads and instances are safe to share
// across threads. Every E_n backend is generic over this type.
class ExpectationOracle {
public:
    ExpectationOracle(int n, std::vector<Rat> table_by_mask);

    int arity() const { return n_; }
    // B must be a nonempty subset of {1..n}.
    const Rat& moment(SubsetMask b) const;
    Rat moment_of(std::span<const int> indices) const;  // 1-based indices

    // Oracle for the sub-family selected by `keep` (1-based, strictly
    // increasing), with indices relabeled to 1..|keep| in order.
    ExpectationOracle restrict_to(std::span<const int> keep) const;

    // Oracle with the index slots permuted: new index i reads old index
    // perm[i-1] (perm is 1-based values, a permutation of 1..n).
    ExpectationOracle permuted(std::span<const int> perm) const;

    // Appends a constant-1 function as index n+1.
    ExpectationOracle extended_with_unit() const;

private:
    int n_;
    std::vector<Rat> table_;  // indexed by mask; entry 0 unused
};

ExpectationOracle oracle_from_staircases(std::span<const StaircaseSeq> fs);
ExpectationOracle oracle_from_indicators(std::span<const GridIndicator> fs);
ExpectationOracle oracle_from_grid_functions(std::span<const GridFunction> fs);
ExpectationOracle oracle_from_rectangles(const RectangleFamily& fam);
// n copies of the same function: moment(B) depends only on |B|.
ExpectationOracle oracle_equal_function(const GridFunction& f, int n);

} // namespace fkg
