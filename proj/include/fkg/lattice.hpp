#pragma once

#include "fkg/rational.hpp"

#include <boost/dynamic_bitset.hpp>

#include <functional>
#include <span>
#include <vector>

namespace fkg {

// A monotone staircase subset of the unit square at grid resolution m,
// encoded as the weakly decreasing integer sequence (a_1,...,a_m) with
// m >= a_1 >= ... >= a_m >= 0. Cell (i,j) of the m x m grid belongs to the
// subset iff j <= a_i. Immutable after construction.
class StaircaseSeq {
public:
    // Validates the shape and range; diagnostics name the first offending
    // 1-based index.
    StaircaseSeq(int m, std::vector<int> values);

    static StaircaseSeq constant(int m, int value);
    static StaircaseSeq full(int m) { return constant(m, m); }
    static StaircaseSeq zero(int m) { return constant(m, 0); }

    int m() const { return m_; }
    // 1-based, matching the (a_1,...,a_m) convention.
    int value(int i) const { return values_[static_cast<std::size_t>(i) - 1]; }
    const std::vector<int>& values() const { return values_; }

    // Exact measure of the underlying cell set: (a_1 + ... + a_m) / m^2.
    Rat expect() const;

    bool is_constant() const;
    bool has_descent_at(int i) const;   // a_i > a_{i+1}, i in [1, m-1]
    std::vector<int> descents() const;  // ascending 1-based indices

    bool operator==(const StaircaseSeq& other) const = default;
    // Lexicographic on (m, values); the canonical tuple order.
    bool operator<(const StaircaseSeq& other) const;

private:
    int m_;
    std::vector<int> values_;
};

enum class PerturbKind { minus, plus, star };

// The three single-entry perturbations at a descent i:
//   minus: a_i <- a_{i+1};  plus: a_{i+1} <- a_i;  star: a_{i+1} <- a_{i+1}+1.
// Requires a descent at i; the result is again a valid sequence.
StaircaseSeq perturb(const StaircaseSeq& a, int i, PerturbKind kind);

// Component-wise minimum; at the set level this is the intersection, and the
// indicator of the meet is the product of the indicators.
StaircaseSeq staircase_meet(const StaircaseSeq& a, const StaircaseSeq& b);

// Block replication into A(t*m): the underlying subset of the unit square is
// unchanged, so the measure is preserved exactly.
StaircaseSeq refine(const StaircaseSeq& a, int t);

// Membership test for a subset of the unit square, evaluated at exact
// rational points.
using MonotonePredicate = std::function<bool(const Rat& x, const Rat& y)>;

// Inner approximation of a monotone (lower) set: cell (i,j) is included iff
// its top-right corner (i/m, j/m) satisfies pred. Whether boundary points
// count is pred's own convention. A non-monotone pred may produce a sequence
// that fails validation and is rejected.
StaircaseSeq discretize_monotone(const MonotonePredicate& pred, int m);

// An arbitrary 0/1 function on the m x m cell grid, stored as a bitset over
// the m^2 positions in row-major (i,j) order.
class GridIndicator {
public:
    GridIndicator(int m, const std::vector<std::pair<int, int>>& cells);
    static GridIndicator empty(int m);
    static GridIndicator from_staircase(const StaircaseSeq& a);

    int m() const { return m_; }
    bool contains(int i, int j) const;  // 1-based
    std::size_t cell_count() const { return bits_.count(); }
    const boost::dynamic_bitset<>& bits() const { return bits_; }

    // Complement within the m x m grid.
    GridIndicator complement() const;
    bool disjoint_with(const GridIndicator& other) const;

    // Row-major sorted (i,j) pairs, the serialization order.
    std::vector<std::pair<int, int>> sorted_cells() const;

    bool operator==(const GridIndicator& other) const = default;

private:
    GridIndicator(int m, boost::dynamic_bitset<> bits);
    friend GridIndicator indicator_from_bits(int m, boost::dynamic_bitset<> bits);

    int m_;
    boost::dynamic_bitset<> bits_;
};

GridIndicator indicator_from_bits(int m, boost::dynamic_bitset<> bits);

// Exact measure of the intersection of the underlying cell sets.
Rat product_expect(std::span<const StaircaseSeq> fs);
Rat product_expect(std::span<const GridIndicator> fs);

// A nonnegative exact-rational function constant on grid cells. When the
// monotone flag is set, values must be weakly decreasing along both axes.
class GridFunction {
public:
    // values is row-major: values[(i-1)*m + (j-1)] = f on cell (i,j).
    GridFunction(int m, std::vector<Rat> values, bool monotone = false);

    static GridFunction constant(int m, const Rat& value);
    static GridFunction from_staircase(const StaircaseSeq& a);
    static GridFunction from_indicator(const GridIndicator& s);

    int m() const { return m_; }
    bool monotone() const { return monotone_; }
    const Rat& at(int i, int j) const;  // 1-based
    const Rat& cell(std::size_t idx) const { return values_[idx]; }
    std::size_t cell_total() const { return values_.size(); }
    const std::vector<Rat>& values() const { return values_; }

    Rat expect() const;

    GridFunction operator+(const GridFunction& other) const;
    GridFunction scaled(const Rat& factor) const;

    bool operator==(const GridFunction& other) const = default;

private:
    int m_;
    std::vector<Rat> values_;
    bool monotone_;
};

// n down-rectangles [0,r_1] x ... x [0,r_k] in the unit k-cube, given by
// their rational corner vectors.
class RectangleFamily {
public:
    RectangleFamily(int k, std::vector<std::vector<Rat>> rects);

    int k() const { return k_; }
    int size() const { return static_cast<int>(rects_.size()); }
    const std::vector<Rat>& rect(int i) const;  // 1-based
    const std::vector<std::vector<Rat>>& rects() const { return rects_; }

private:
    int k_;
    std::vector<std::vector<Rat>> rects_;
};

// Volume of the intersection of the rectangles indexed by B (1-based,
// nonempty): the per-axis minimum, multiplied across axes.
Rat rect_product_expect(const RectangleFamily& fam, std::span<const int> indices);

} // namespace fkg
