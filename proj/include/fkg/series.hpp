#pragma once

#include "fkg/lattice.hpp"
#include "fkg/rational.hpp"

#include <span>
#include <vector>

namespace fkg {

inline constexpr int kPartitionsOfCap = 30;
inline constexpr int kPrimesEncodingCap = 8;
inline constexpr int kSeriesEquivDefaultCap = 3;  // n=4 behind an explicit override

// Integer partition lambda_1 >= ... >= lambda_l >= 1.
class IntPartition {
public:
    explicit IntPartition(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    int sum() const { return sum_; }
    int length() const { return static_cast<int>(parts_.size()); }

    bool operator==(const IntPartition& other) const = default;

private:
    std::vector<int> parts_;
    int sum_;
};

// All partitions of n in reverse-lexicographic order: (n) first, (1,...,1) last.
std::vector<IntPartition> partitions_of(int n);

// z_lambda = prod_i i^{m_i} m_i!; the conjugacy class of cycle type lambda
// in S_n has n!/z_lambda elements, so z_lambda must divide n!.
Int z_lambda(const IntPartition& lam);

// p_d(f) = E(f^d), exact.
Rat moment(const GridFunction& f, int d);

// Eager table of p_1..p_D for one function.
class MomentVector {
public:
    MomentVector(const GridFunction& f, int max_degree);

    int max_degree() const { return static_cast<int>(p_.size()) - 1; }
    const Rat& p(int d) const;
    Rat p_lambda(const IntPartition& lam) const;

private:
    std::vector<Rat> p_;  // p_[d] = E(f^d); p_[0] = 1
};

// E_n(f,...,f) = n! sum over |lambda|=n of (-1)^{l(lambda)-1} p_lambda / z_lambda,
// computed with integer class sizes n!/z_lambda.
Rat en_equal(const GridFunction& f, int n);

// Dense polynomial in t modulo t^{D+1}, exact rational coefficients.
class TruncatedSeries {
public:
    explicit TruncatedSeries(int degree_cap);
    TruncatedSeries(int degree_cap, std::vector<Rat> coeffs);

    static TruncatedSeries one(int degree_cap);

    int degree_cap() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Rat& coeff(int d) const;
    void set_coeff(int d, Rat value);

    TruncatedSeries operator+(const TruncatedSeries& other) const;
    TruncatedSeries operator-(const TruncatedSeries& other) const;
    TruncatedSeries operator*(const TruncatedSeries& other) const;

    bool operator==(const TruncatedSeries& other) const = default;

private:
    std::vector<Rat> coeffs_;
};

// log(F) mod t^{D+1}; requires constant term exactly 1.
TruncatedSeries series_log(const TruncatedSeries& f);
// exp(Z) mod t^{D+1}; requires constant term exactly 0.
TruncatedSeries series_exp(const TruncatedSeries& z);

// A series whose coefficients are functions constant on grid cells, stored
// cell-major as one rational series per cell so log/exp act cell-wise.
class GridSeries {
public:
    GridSeries(int m, int degree_cap);  // the constant series 1

    // 1 - sum_j fs[j] t^{exponents[j]}; exponents are distinct, in [1, cap].
    static GridSeries one_minus_terms(std::span<const GridFunction> fs,
                                      std::span<const int> exponents, int degree_cap);

    int m() const { return m_; }
    int degree_cap() const { return degree_cap_; }
    const TruncatedSeries& cell_series(std::size_t idx) const { return cells_[idx]; }

    GridSeries cellwise_log() const;
    // Coefficient-wise expectation: averages each degree over the cells.
    TruncatedSeries expect() const;

private:
    int m_;
    int degree_cap_;
    std::vector<TruncatedSeries> cells_;
};

// For F(x,t) = 1 - f_1(x)t - ... - f_r(x)t^r builds G(F) = exp(E(log F))
// = 1 - c_1 t - ... and returns c_1..c_D.
std::vector<Rat> geometric_mean_coeffs(std::span<const GridFunction> fs, int degree);

struct PrimesEncoding {
    int n = 0;
    std::vector<long long> k;  // k_j = (p_1...p_n)/p_j
    long long target = 0;      // N = k_1 + ... + k_n
};

// First n primes; the only nonnegative solution of s_1 k_1 + ... + s_n k_n = N
// is s = (1,...,1), which makes t^N isolate the fully mixed term.
PrimesEncoding primes_encoding(int n);

// Coefficient of t^N in 1 - exp(E(log(1 - sum_j f_j t^{k_j}))), which equals
// E_n(f_1,...,f_n). n <= 3 by default; n=4 via allow_large; larger refused.
Rat extract_en_via_series(std::span<const GridFunction> fs, bool allow_large = false);

} // namespace fkg
