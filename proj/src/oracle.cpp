#include "fkg/oracle.hpp"

#include "fkg/errors.hpp"

#include <bit>

namespace fkg {

namespace {

constexpr int kMaskArityLimit = 24;  // 2^24 rationals is already far past desk scale

void require_arity(int n) {
    if (n < 1) throw InputError("oracle: arity must be positive");
    if (n > kMaskArityLimit)
        throw BudgetError("oracle: arity " + std::to_string(n) + " exceeds mask limit " +
                          std::to_string(kMaskArityLimit));
}

std::size_t table_size(int n) { return std::size_t{1} << n; }

} // namespace

ExpectationOracle::ExpectationOracle(int n, std::vector<Rat> table_by_mask)
    : n_(n), table_(std::move(table_by_mask)) {
    require_arity(n);
    if (table_.size() != table_size(n_))
        throw InputError("oracle: moment table size mismatch");
}

const Rat& ExpectationOracle::moment(SubsetMask b) const {
    if (b == 0 || b >= table_size(n_))
        throw InputError("oracle: subset mask out of range");
    return table_[b];
}

Rat ExpectationOracle::moment_of(std::span<const int> indices) const {
    SubsetMask b = 0;
    for (int i : indices) {
        if (i < 1 || i > n_) throw InputError("oracle: index " + std::to_string(i) + " out of range");
        b |= SubsetMask{1} << (i - 1);
    }
    return moment(b);
}

ExpectationOracle ExpectationOracle::restrict_to(std::span<const int> keep) const {
    const int r = static_cast<int>(keep.size());
    require_arity(r);
    for (std::size_t t = 0; t < keep.size(); ++t) {
        if (keep[t] < 1 || keep[t] > n_ || (t > 0 && keep[t] <= keep[t - 1]))
            throw InputError("oracle: restriction indices must be strictly increasing in range");
    }
    std::vector<Rat> table(table_size(r));
    for (SubsetMask b = 1; b < table_size(r); ++b) {
        SubsetMask expanded = 0;
        for (int t = 0; t < r; ++t)
            if (b & (SubsetMask{1} << t)) expanded |= SubsetMask{1} << (keep[t] - 1);
        table[b] = moment(expanded);
    }
    return ExpectationOracle(r, std::move(table));
}

ExpectationOracle ExpectationOracle::permuted(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != n_)
        throw InputError("oracle: permutation length mismatch");
    SubsetMask seen = 0;
    for (int p : perm) {
        if (p < 1 || p > n_) throw InputError("oracle: permutation value out of range");
        seen |= SubsetMask{1} << (p - 1);
    }
    if (std::popcount(seen) != n_) throw InputError("oracle: not a permutation");
    std::vector<Rat> table(table_size(n_));
    for (SubsetMask b = 1; b < table_size(n_); ++b) {
        SubsetMask mapped = 0;
        for (int i = 0; i < n_; ++i)
            if (b & (SubsetMask{1} << i)) mapped |= SubsetMask{1} << (perm[i] - 1);
        table[b] = moment(mapped);
    }
    return ExpectationOracle(n_, std::move(table));
}

ExpectationOracle ExpectationOracle::extended_with_unit() const {
    const int n = n_ + 1;
    require_arity(n);
    const SubsetMask unit_bit = SubsetMask{1} << n_;
    std::vector<Rat> table(table_size(n));
    for (SubsetMask b = 1; b < table_size(n); ++b) {
        const SubsetMask old_part = b & ~unit_bit;
        table[b] = (old_part == 0) ? Rat(1) : moment(old_part);
    }
    return ExpectationOracle(n, std::move(table));
}

ExpectationOracle oracle_from_staircases(std::span<const StaircaseSeq> fs) {
    const int n = static_cast<int>(fs.size());
    require_arity(n);
    const int m = fs.front().m();
    for (const auto& f : fs)
        if (f.m() != m)
            throw InputError("oracle: mismatched resolution " + std::to_string(m) + " vs " +
                             std::to_string(f.m()));
    // meets[b] = component-wise minimum over the subset; built by peeling the
    // lowest bit so each mask costs one meet.
    std::vector<StaircaseSeq> meets;
    meets.reserve(table_size(n));
    meets.push_back(StaircaseSeq::full(m));  // placeholder for mask 0
    std::vector<Rat> table(table_size(n));
    for (SubsetMask b = 1; b < table_size(n); ++b) {
        const int low = std::countr_zero(b);
        const SubsetMask rest = b & (b - 1);
        StaircaseSeq meet =
            rest == 0 ? fs[static_cast<std::size_t>(low)]
                      : staircase_meet(meets[rest], fs[static_cast<std::size_t>(low)]);
        table[b] = meet.expect();
        meets.push_back(std::move(meet));
    }
    return ExpectationOracle(n, std::move(table));
}

ExpectationOracle oracle_from_indicators(std::span<const GridIndicator> fs) {
    const int n = static_cast<int>(fs.size());
    require_arity(n);
    const int m = fs.front().m();
    for (const auto& f : fs)
        if (f.m() != m)
            throw InputError("oracle: mismatched resolution " + std::to_string(m) + " vs " +
                             std::to_string(f.m()));
    std::vector<boost::dynamic_bitset<>> inter;
    inter.reserve(table_size(n));
    inter.emplace_back();  // mask 0 placeholder
    std::vector<Rat> table(table_size(n));
    const long cells = static_cast<long>(m) * m;
    for (SubsetMask b = 1; b < table_size(n); ++b) {
        const int low = std::countr_zero(b);
        const SubsetMask rest = b & (b - 1);
        boost::dynamic_bitset<> bits = fs[static_cast<std::size_t>(low)].bits();
        if (rest != 0) bits &= inter[rest];
        Rat q(static_cast<long>(bits.count()), cells);
        q.canonicalize();
        table[b] = std::move(q);
        inter.push_back(std::move(bits));
    }
    return ExpectationOracle(n, std::move(table));
}

ExpectationOracle oracle_from_grid_functions(std::span<const GridFunction> fs) {
    const int n = static_cast<int>(fs.size());
    require_arity(n);
    const int m = fs.front().m();
    for (const auto& f : fs)
        if (f.m() != m)
            throw InputError("oracle: mismatched resolution " + std::to_string(m) + " vs " +
                             std::to_string(f.m()));
    const std::size_t cells = static_cast<std::size_t>(m) * m;
    std::vector<std::vector<Rat>> prod;
    prod.reserve(table_size(n));
    prod.emplace_back();  // mask 0 placeholder
    std::vector<Rat> table(table_size(n));
    const Rat denom(static_cast<long>(cells), 1);
    for (SubsetMask b = 1; b < table_size(n); ++b) {
        const int low = std::countr_zero(b);
        const SubsetMask rest = b & (b - 1);
        const GridFunction& f = fs[static_cast<std::size_t>(low)];
        std::vector<Rat> p(cells);
        if (rest == 0) {
            for (std::size_t c = 0; c < cells; ++c) p[c] = f.cell(c);
        } else {
            const std::vector<Rat>& base = prod[rest];
            for (std::size_t c = 0; c < cells; ++c) p[c] = base[c] * f.cell(c);
        }
        Rat sum(0);
        for (const Rat& v : p) sum += v;
        table[b] = sum / denom;
        prod.push_back(std::move(p));
    }
    return ExpectationOracle(n, std::move(table));
}

ExpectationOracle oracle_from_rectangles(const RectangleFamily& fam) {
    const int n = fam.size();
    require_arity(n);
    const int k = fam.k();
    // mins[b][j] = min over the subset of the j-th coordinates.
    std::vector<std::vector<Rat>> mins;
    mins.reserve(table_size(n));
    mins.emplace_back();
    std::vector<Rat> table(table_size(n));
    for (SubsetMask b = 1; b < table_size(n); ++b) {
        const int low = std::countr_zero(b);
        const SubsetMask rest = b & (b - 1);
        std::vector<Rat> axis = fam.rect(low + 1);
        if (rest != 0) {
            for (int j = 0; j < k; ++j)
                if (mins[rest][static_cast<std::size_t>(j)] < axis[static_cast<std::size_t>(j)])
                    axis[static_cast<std::size_t>(j)] = mins[rest][static_cast<std::size_t>(j)];
        }
        Rat vol(1);
        for (const Rat& c : axis) vol *= c;
        table[b] = std::move(vol);
        mins.push_back(std::move(axis));
    }
    return ExpectationOracle(n, std::move(table));
}

ExpectationOracle oracle_equal_function(const GridFunction& f, int n) {
    require_arity(n);
    const std::size_t cells = f.cell_total();
    const Rat denom(static_cast<long>(cells), 1);
    // p[d] = E(f^d) for d = 1..n.
    std::vector<Rat> powers(cells, Rat(1));
    std::vector<Rat> p(static_cast<std::size_t>(n) + 1);
    for (int d = 1; d <= n; ++d) {
        Rat sum(0);
        for (std::size_t c = 0; c < cells; ++c) {
            powers[c] *= f.cell(c);
            sum += powers[c];
        }
        p[static_cast<std::size_t>(d)] = sum / denom;
    }
    std::vector<Rat> table(table_size(n));
    for (SubsetMask b = 1; b < table_size(n); ++b)
        table[b] = p[static_cast<std::size_t>(std::popcount(b))];
    return ExpectationOracle(n, std::move(table));
}

} // namespace fkg
