#include "fkg/engine.hpp"

#include "fkg/errors.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace fkg {

namespace {

CycleDecomposition cycles_of_line(const std::vector<int>& line) {
    const int n = static_cast<int>(line.size());
    CycleDecomposition out;
    out.n = n;
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (int start = 1; start <= n; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        std::vector<int> cycle;
        int cur = start;
        do {
            seen[static_cast<std::size_t>(cur)] = true;
            cycle.push_back(cur);
            cur = line[static_cast<std::size_t>(cur - 1)];
        } while (cur != start);
        out.cycles.push_back(std::move(cycle));
    }
    return out;
}

SubsetMask mask_of(std::span<const int> indices) {
    SubsetMask mask = 0;
    for (int i : indices) mask |= SubsetMask{1} << (i - 1);
    return mask;
}

} // namespace

PermutationCycleStream::PermutationCycleStream(int n, int cap) : n_(n) {
    if (n < 1) throw InputError("permutations: n must be at least 1");
    if (n > cap) {
        throw BudgetError("permutations: n=" + std::to_string(n) +
                          " exceeds cap " + std::to_string(cap));
    }
    line_.resize(static_cast<std::size_t>(n));
    std::iota(line_.begin(), line_.end(), 1);
}

bool PermutationCycleStream::next(CycleDecomposition& out) {
    if (done_) return false;
    if (!first_ && !std::next_permutation(line_.begin(), line_.end())) {
        done_ = true;
        return false;
    }
    first_ = false;
    out = cycles_of_line(line_);
    return true;
}

SetPartitionStream::SetPartitionStream(int n, int cap) : n_(n) {
    if (n < 1) throw InputError("set partitions: n must be at least 1");
    if (n > cap) {
        throw BudgetError("set partitions: n=" + std::to_string(n) +
                          " exceeds cap " + std::to_string(cap));
    }
    rgs_.assign(static_cast<std::size_t>(n), 0);
    max_prefix_.assign(static_cast<std::size_t>(n), 0);
}

bool SetPartitionStream::next(SetPartition& out) {
    if (done_) return false;
    if (!first_) {
        // Advance the restricted growth string: rgs[i] may rise to
        // max(rgs[0..i-1]) + 1; later positions reset to 0.
        int i = n_ - 1;
        for (; i >= 1; --i) {
            if (rgs_[static_cast<std::size_t>(i)] <= max_prefix_[static_cast<std::size_t>(i - 1)]) break;
        }
        if (i < 1) {
            done_ = true;
            return false;
        }
        ++rgs_[static_cast<std::size_t>(i)];
        max_prefix_[static_cast<std::size_t>(i)] =
            std::max(max_prefix_[static_cast<std::size_t>(i - 1)], rgs_[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < n_; ++j) {
            rgs_[static_cast<std::size_t>(j)] = 0;
            max_prefix_[static_cast<std::size_t>(j)] = max_prefix_[static_cast<std::size_t>(j - 1)];
        }
    }
    first_ = false;
    out.n = n_;
    const int block_count = max_prefix_[static_cast<std::size_t>(n_ - 1)] + 1;
    out.blocks.assign(static_cast<std::size_t>(block_count), 0);
    for (int idx = 1; idx <= n_; ++idx) {
        out.blocks[static_cast<std::size_t>(rgs_[static_cast<std::size_t>(idx - 1)])] |=
            SubsetMask{1} << (idx - 1);
    }
    return true;
}

std::uint64_t factorial_u64(int n) {
    if (n < 0 || n > 20) throw InputError("factorial: out of uint64 range");
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
    return r;
}

std::uint64_t bell_number(int n) {
    if (n < 0 || n > 25) throw InputError("bell: out of uint64 range");
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i <= n; ++i) {
        std::vector<std::uint64_t> next;
        next.reserve(row.size() + 1);
        next.push_back(row.back());
        for (std::uint64_t v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

Rat e_sigma(const ExpectationOracle& oracle, const CycleDecomposition& sigma) {
    if (sigma.n != oracle.arity()) throw InputError("e_sigma: arity mismatch");
    Rat prod(1);
    for (const auto& cycle : sigma.cycles) prod *= oracle.moment(mask_of(cycle));
    return prod;
}

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::naive: return "naive";
        case Backend::partition: return "partition";
        case Backend::recursive: return "recursive";
    }
    throw EngineBug("backend_name: unknown backend");
}

Backend backend_from_name(const std::string& name) {
    if (name == "naive") return Backend::naive;
    if (name == "partition") return Backend::partition;
    if (name == "recursive") return Backend::recursive;
    throw InputError("unknown backend '" + name + "' (expected naive, partition, or recursive)");
}

EnResult en_naive(const ExpectationOracle& oracle, int cap) {
    const int n = oracle.arity();
    PermutationCycleStream stream(n, cap);
    EnResult result;
    result.backend = Backend::naive;
    Rat sum(0);
    CycleDecomposition sigma;
    while (stream.next(sigma)) {
        const Rat term = e_sigma(oracle, sigma);
        if ((sigma.cycle_count() - 1) % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
        ++result.term_count;
    }
    result.value = std::move(sum);
    return result;
}

EnResult en_partition(const ExpectationOracle& oracle, int cap) {
    const int n = oracle.arity();
    SetPartitionStream stream(n, cap);
    EnResult result;
    result.backend = Backend::partition;
    Rat sum(0);
    SetPartition pi;
    while (stream.next(pi)) {
        // Each block of size p stands for its (p-1)! cyclic orderings.
        Int weight(1);
        Rat prod(1);
        for (SubsetMask block : pi.blocks) {
            const int size = std::popcount(block);
            if (size > 1) weight *= factorial(static_cast<unsigned>(size - 1));
            prod *= oracle.moment(block);
        }
        prod *= Rat(weight);
        if ((pi.blocks.size() - 1) % 2 == 0) {
            sum += prod;
        } else {
            sum -= prod;
        }
        ++result.term_count;
    }
    result.value = std::move(sum);
    return result;
}

namespace {

// E of a list of disjoint support blocks: merge the last block into each
// earlier one, minus the split term. One node per invocation.
Rat en_blocks(const ExpectationOracle& oracle, std::vector<SubsetMask>& blocks,
              std::uint64_t& nodes) {
    ++nodes;
    const std::size_t k = blocks.size();
    if (k == 1) return oracle.moment(blocks[0]);
    const SubsetMask last = blocks.back();
    blocks.pop_back();
    Rat sum(0);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        const SubsetMask saved = blocks[i];
        blocks[i] = saved | last;
        sum += en_blocks(oracle, blocks, nodes);
        blocks[i] = saved;
    }
    sum -= en_blocks(oracle, blocks, nodes) * oracle.moment(last);
    blocks.push_back(last);
    return sum;
}

} // namespace

EnResult en_recursive(const ExpectationOracle& oracle) {
    const int n = oracle.arity();
    std::vector<SubsetMask> blocks;
    blocks.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) blocks.push_back(SubsetMask{1} << (i - 1));
    EnResult result;
    result.backend = Backend::recursive;
    result.value = en_blocks(oracle, blocks, result.term_count);
    return result;
}

EnResult en_by_backend(const ExpectationOracle& oracle, Backend backend) {
    switch (backend) {
        case Backend::naive: return en_naive(oracle);
        case Backend::partition: return en_partition(oracle);
        case Backend::recursive: return en_recursive(oracle);
    }
    throw EngineBug("en_by_backend: unknown backend");
}

Rat partial_cycle_sum(const ExpectationOracle& oracle, std::span<const int> cycle) {
    const int n = oracle.arity();
    if (cycle.empty()) throw InputError("partial cycle sum: empty cycle");
    SubsetMask mask = 0;
    for (int i : cycle) {
        if (i < 1 || i > n) throw InputError("partial cycle sum: index out of range");
        const SubsetMask bit = SubsetMask{1} << (i - 1);
        if (mask & bit) throw InputError("partial cycle sum: repeated index");
        mask |= bit;
    }
    const int p = static_cast<int>(cycle.size());
    if (p == n) return oracle.moment(mask);
    std::vector<int> complement;
    complement.reserve(static_cast<std::size_t>(n - p));
    for (int i = 1; i <= n; ++i) {
        if (!(mask & (SubsetMask{1} << (i - 1)))) complement.push_back(i);
    }
    const ExpectationOracle rest = oracle.restrict_to(complement);
    return -oracle.moment(mask) * en_partition(rest).value;
}

Rat kappa3(const ExpectationOracle& oracle) {
    if (oracle.arity() != 3) throw InputError("kappa3: requires exactly 3 functions");
    const Rat e1 = oracle.moment(0b001);
    const Rat e2 = oracle.moment(0b010);
    const Rat e3 = oracle.moment(0b100);
    return oracle.moment(0b111) + 2 * e1 * e2 * e3 - e1 * oracle.moment(0b110) -
           e2 * oracle.moment(0b101) - e3 * oracle.moment(0b011);
}

Rat en_constant_closed_form(std::span<const Rat> alphas) {
    if (alphas.empty()) throw InputError("constant closed form: empty level list");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] < 0 || alphas[i] > 1) {
            throw InputError("constant closed form: level out of range [0,1] at index " +
                             std::to_string(i + 1));
        }
        if (i > 0 && alphas[i] < alphas[i - 1]) {
            throw InputError("constant closed form: levels not weakly increasing at index " +
                             std::to_string(i + 1));
        }
    }
    Rat prod = alphas[0];
    for (std::size_t j = 2; j <= alphas.size(); ++j) {
        prod *= Rat(static_cast<long>(j) - 1) - alphas[j - 1];
    }
    return prod;
}

Rat en_with_unit(const ExpectationOracle& oracle) {
    const int n = oracle.arity() + 1;
    if (n < 2) throw InputError("with unit: need at least one base function");
    const ExpectationOracle extended = oracle.extended_with_unit();
    const Rat value = en_partition(extended).value;
    Rat expected;
    if (n == 2) {
        expected = 0;
    } else {
        expected = Rat(n - 2) * en_partition(oracle).value;
    }
    if (value != expected) {
        throw EngineBug("with unit: E_n(...,1) != (n-2) E_{n-1}, value " + rat_to_string(value) +
                        " vs " + rat_to_string(expected));
    }
    return value;
}

} // namespace fkg
