#pragma once

#include "fkg/oracle.hpp"
#include "fkg/rational.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fkg {

inline constexpr int kNaiveCap = 9;       // 9! = 362880 permutation terms
inline constexpr int kPartitionCap = 14;  // Bell(14) ~ 1.9e8 partition terms

// A permutation of {1..n} as disjoint cycles in canonical form: each cycle
// starts at its smallest element, cycles ordered by smallest element.
struct CycleDecomposition {
    int n = 0;
    std::vector<std::vector<int>> cycles;

    int cycle_count() const { return static_cast<int>(cycles.size()); }
};

// A set partition of {1..n}; blocks are bitmasks ordered by smallest element.
struct SetPartition {
    int n = 0;
    std::vector<SubsetMask> blocks;
};

// Streams the n! permutations as cycle decompositions, in lexicographic
// order of the one-line notation. Refuses n beyond the cap.
class PermutationCycleStream {
public:
    explicit PermutationCycleStream(int n, int cap = kNaiveCap);
    // Fills `out` with the next permutation; false when exhausted.
    bool next(CycleDecomposition& out);

private:
    int n_;
    bool done_ = false;
    bool first_ = true;
    std::vector<int> line_;  // one-line notation, 1-based values
};

// Streams the Bell(n) set partitions via restricted growth strings, in
// lexicographic RGS order. Refuses n beyond the cap.
class SetPartitionStream {
public:
    explicit SetPartitionStream(int n, int cap = kPartitionCap);
    bool next(SetPartition& out);

private:
    int n_;
    bool done_ = false;
    bool first_ = true;
    std::vector<int> rgs_;
    std::vector<int> max_prefix_;
};

std::uint64_t factorial_u64(int n);
std::uint64_t bell_number(int n);

// Product over the cycles of sigma of the moment of the cycle's support.
// Depends only on the supports, not on the order within each cycle.
Rat e_sigma(const ExpectationOracle& oracle, const CycleDecomposition& sigma);

enum class Backend { naive, partition, recursive };

std::string backend_name(Backend b);
Backend backend_from_name(const std::string& name);

struct EnResult {
    Rat value;
    Backend backend = Backend::partition;
    std::uint64_t term_count = 0;
};

// The literal signed sum over all n! permutations. This is the trusted
// reference backend; term_count = n!.
EnResult en_naive(const ExpectationOracle& oracle, int cap = kNaiveCap);

// Cycle sum compressed over set partitions: each block B absorbs its
// (|B|-1)! cyclic orderings, so
//   E_n = sum over partitions pi of (-1)^{|pi|-1} prod_B (|B|-1)! E(prod B).
// term_count = Bell(n). This is the default backend.
EnResult en_partition(const ExpectationOracle& oracle, int cap = kPartitionCap);

// Recursion on lists of disjoint index blocks: merge the last block into
// each earlier one, minus the split term E_{k-1} * E(last block).
// term_count = number of recursion nodes (n! evaluation nodes in total).
EnResult en_recursive(const ExpectationOracle& oracle);

EnResult en_by_backend(const ExpectationOracle& oracle, Backend backend);

// Sum of (-1)^{C_sigma - 1} E_sigma over the permutations containing the
// fixed cycle c: equals E(f^1...f^n) when |c| = n, and otherwise
// -E(prod over c) * E_{n-p} of the complementary family.
Rat partial_cycle_sum(const ExpectationOracle& oracle, std::span<const int> cycle);

// Third joint cumulant (Ursell function); requires arity 3. Unlike E_3 it
// is not nonnegative on monotone indicators.
Rat kappa3(const ExpectationOracle& oracle);

// E_n of constant-level indicators 0 <= alpha_1 <= ... <= alpha_n <= 1:
//   alpha_1 (1 - alpha_2) (2 - alpha_3) ... (n-1 - alpha_n).
Rat en_constant_closed_form(std::span<const Rat> alphas);

// Extends the family by a constant-1 function, computes E_n, and checks it
// against the branching identity E_n(...,1) = (n-2) E_{n-1}; a mismatch
// throws EngineBug. Returns the E_n value.
Rat en_with_unit(const ExpectationOracle& oracle);

} // namespace fkg
