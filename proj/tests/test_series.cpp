#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fkg/engine.hpp"
#include "fkg/errors.hpp"
#include "fkg/lattice.hpp"
#include "fkg/oracle.hpp"
#include "fkg/rational.hpp"
#include "fkg/sampling.hpp"
#include "fkg/series.hpp"

#include "oracle_helpers.hpp"

#include <vector>

using namespace fkg;

namespace {

// Number of partitions of n, the classical sequence.
constexpr int kPartitionCounts[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176};

TruncatedSeries geometric_series(int cap) {
    // 1/(1-t) = 1 + t + t^2 + ...
    TruncatedSeries s(cap);
    for (int d = 0; d <= cap; ++d) s.set_coeff(d, Rat(1));
    return s;
}

} // namespace

TEST_CASE("integer partitions enumerate in reverse-lexicographic order") {
    const auto parts5 = partitions_of(5);
    REQUIRE(parts5.size() == 7);
    CHECK(parts5.front() == IntPartition({5}));
    CHECK(parts5.back() == IntPartition({1, 1, 1, 1, 1}));
    CHECK(parts5[2] == IntPartition({3, 2}));

    for (int n = 1; n <= 15; ++n)
        CHECK(partitions_of(n).size() == static_cast<std::size_t>(kPartitionCounts[n]));

    CHECK_THROWS_AS(partitions_of(0), InputError);
    CHECK_THROWS_AS(partitions_of(kPartitionsOfCap + 1), BudgetError);
    CHECK_THROWS_AS(IntPartition({2, 3}), InputError);
    CHECK_THROWS_AS(IntPartition({1, 0}), InputError);
}

TEST_CASE("z_lambda and class sizes") {
    CHECK(z_lambda(IntPartition({1, 1, 1})) == 6);   // identity class, size 1
    CHECK(z_lambda(IntPartition({3})) == 3);         // 3-cycles, class size 2
    CHECK(z_lambda(IntPartition({2, 1})) == 2);      // transpositions, size 3
    CHECK(z_lambda(IntPartition({2, 2})) == 8);
    CHECK(z_lambda(IntPartition({4, 3, 3, 1})) == 72);

    // Class sizes n!/z_lambda sum to n!.
    for (int n = 1; n <= 10; ++n) {
        Int total = 0;
        Int nfact = 1;
        for (int i = 2; i <= n; ++i) nfact *= i;
        for (const IntPartition& lam : partitions_of(n)) total += nfact / z_lambda(lam);
        CHECK(total == nfact);
    }
}

TEST_CASE("equal-argument values match the partition backend") {
    Rng rng(1001);
    for (int trial = 0; trial < 10; ++trial) {
        const GridFunction f = sample_grid_function(rng, 3);
        for (int n = 1; n <= 6; ++n) {
            const Rat via_classes = en_equal(f, n);
            if (n == 1) {
                CHECK(via_classes == f.expect());
                continue;
            }
            const Rat via_partitions = en_partition(oracle_equal_function(f, n)).value;
            CHECK(via_classes == via_partitions);
        }
    }
}

TEST_CASE("truncated series arithmetic") {
    const TruncatedSeries g = geometric_series(5);
    const TruncatedSeries sq = g * g;  // 1/(1-t)^2 = sum (d+1) t^d
    for (int d = 0; d <= 5; ++d) CHECK(sq.coeff(d) == Rat(d + 1));

    TruncatedSeries one_minus_t = TruncatedSeries::one(5);
    one_minus_t.set_coeff(1, Rat(-1));
    CHECK(one_minus_t * g == TruncatedSeries::one(5));

    CHECK((g - g) == TruncatedSeries(5));
    CHECK((g + (TruncatedSeries(5) - g)) == TruncatedSeries(5));
}

TEST_CASE("series log of 1-t is the Mercator series") {
    TruncatedSeries f = TruncatedSeries::one(6);
    f.set_coeff(1, Rat(-1));
    const TruncatedSeries l = series_log(f);
    CHECK(l.coeff(0) == Rat(0));
    CHECK(l.coeff(1) == Rat(-1));
    CHECK(l.coeff(2) == Rat(-1, 2));
    CHECK(l.coeff(3) == Rat(-1, 3));
    CHECK(l.coeff(6) == Rat(-1, 6));

    CHECK(series_exp(l) == f);
    CHECK_THROWS_WITH_AS(series_log(TruncatedSeries(3)),
                         doctest::Contains("constant term must be 1"), InputError);
    CHECK_THROWS_WITH_AS(series_exp(TruncatedSeries::one(3)),
                         doctest::Contains("constant term must be 0"), InputError);
}

TEST_CASE("log/exp round-trip on random series") {
    Rng rng(1002);
    for (int trial = 0; trial < 20; ++trial) {
        TruncatedSeries f = TruncatedSeries::one(8);
        for (int d = 1; d <= 8; ++d) {
            const int num = rng.below_int(9) - 4;
            const int den = 1 + rng.below_int(4);
            f.set_coeff(d, make_rat(num, den));
        }
        CHECK(series_exp(series_log(f)) == f);
    }
}

TEST_CASE("geometric mean of an indicator series is binomial") {
    // For F = 1 - chi t with E(chi) = p, G(F) = (1-t)^p, so the returned
    // c_d = (-1)^{d+1} C(p, d).
    const StaircaseSeq a(2, {2, 1});
    const GridFunction f = GridFunction::from_staircase(a);
    const Rat p = Rat(3, 4);
    const auto coeffs = geometric_mean_coeffs(std::vector<GridFunction>{f}, 5);
    REQUIRE(coeffs.size() == 5);
    Rat binom = p;  // C(p,1)
    CHECK(coeffs[0] == p);
    for (int d = 2; d <= 5; ++d) {
        binom *= (p - Rat(d - 1)) / Rat(d);
        const Rat expected = (d % 2 == 0) ? -binom : binom;
        CHECK(coeffs[static_cast<std::size_t>(d - 1)] == expected);
    }
}

TEST_CASE("geometric mean coefficients recover equal-argument values") {
    Rng rng(1003);
    for (int trial = 0; trial < 5; ++trial) {
        const StaircaseSeq a = sample_staircase(rng, 3);
        const GridFunction f = GridFunction::from_staircase(a);
        const auto coeffs = geometric_mean_coeffs(std::vector<GridFunction>{f}, 8);
        Int nfact = 1;
        for (int n = 1; n <= 8; ++n) {
            nfact *= n;
            CHECK(coeffs[static_cast<std::size_t>(n - 1)] == en_equal(f, n) / Rat(nfact));
        }
    }
}

TEST_CASE("primes encoding") {
    const PrimesEncoding two = primes_encoding(2);
    CHECK(two.k == std::vector<long long>{3, 2});
    CHECK(two.target == 5);

    const PrimesEncoding three = primes_encoding(3);
    CHECK(three.k == std::vector<long long>{15, 10, 6});
    CHECK(three.target == 31);

    const PrimesEncoding four = primes_encoding(4);
    CHECK(four.k == std::vector<long long>{105, 70, 42, 30});
    CHECK(four.target == 247);

    const PrimesEncoding one = primes_encoding(1);
    CHECK(one.k == std::vector<long long>{1});
    CHECK(one.target == 1);

    CHECK_THROWS_AS(primes_encoding(kPrimesEncodingCap + 1), BudgetError);
    CHECK_THROWS_AS(primes_encoding(0), InputError);
}

TEST_CASE("degree-one extraction is the plain expectation") {
    const std::vector<GridFunction> single = {
        GridFunction::from_staircase(StaircaseSeq(2, {2, 1}))};
    CHECK(extract_en_via_series(single) == Rat(3, 4));
}

TEST_CASE("series extraction equals the permutation definition") {
    Rng rng(1004);
    for (int trial = 0; trial < 5; ++trial) {
        const std::vector<GridFunction> pair = {
            GridFunction::from_staircase(sample_staircase(rng, 3)),
            GridFunction::from_staircase(sample_staircase(rng, 3))};
        const Rat via_series = extract_en_via_series(pair);
        const Rat direct = en_naive(oracle_from_grid_functions(pair)).value;
        CHECK(via_series == direct);

        const std::vector<GridFunction> triple = {
            GridFunction::from_staircase(sample_staircase(rng, 2)),
            GridFunction::from_staircase(sample_staircase(rng, 2)),
            GridFunction::from_staircase(sample_staircase(rng, 2))};
        CHECK(extract_en_via_series(triple) ==
              en_naive(oracle_from_grid_functions(triple)).value);
    }
}

TEST_CASE("series extraction caps") {
    const std::vector<GridFunction> four(4, GridFunction::constant(2, Rat(1, 2)));
    CHECK_THROWS_WITH_AS(extract_en_via_series(four), doctest::Contains("247"), BudgetError);

    const std::vector<GridFunction> five(5, GridFunction::constant(2, Rat(1, 2)));
    CHECK_THROWS_AS(extract_en_via_series(five, true), BudgetError);
}

TEST_CASE("series extraction handles the large n=4 case when allowed") {
    // Constant functions keep the degree-247 convolution cheap: one distinct
    // cell value means the grid series collapses to a single rational series.
    const Rat c(1, 2);
    const std::vector<GridFunction> four = {
        GridFunction::constant(1, c), GridFunction::constant(1, c),
        GridFunction::constant(1, c), GridFunction::constant(1, c)};
    const Rat via_series = extract_en_via_series(four, true);
    const Rat direct = en_naive(oracle_from_grid_functions(four)).value;
    CHECK(via_series == direct);
}

TEST_CASE("grid series shape checks") {
    const std::vector<GridFunction> fs = {GridFunction::constant(2, Rat(1, 2)),
                                          GridFunction::constant(2, Rat(1, 3))};
    const std::vector<int> good = {1, 2};
    CHECK_NOTHROW(GridSeries::one_minus_terms(fs, good, 4));
    CHECK_THROWS_AS(GridSeries::one_minus_terms(fs, std::vector<int>{1, 1}, 4), InputError);
    CHECK_THROWS_AS(GridSeries::one_minus_terms(fs, std::vector<int>{0, 1}, 4), InputError);
    CHECK_THROWS_AS(GridSeries::one_minus_terms(fs, std::vector<int>{1, 9}, 4), InputError);

    const std::vector<GridFunction> mixed = {GridFunction::constant(2, Rat(1, 2)),
                                             GridFunction::constant(3, Rat(1, 3))};
    CHECK_THROWS_AS(GridSeries::one_minus_terms(mixed, good, 4), InputError);
}

TEST_CASE("expectation of a grid series averages cells") {
    const StaircaseSeq a(2, {1, 0});
    const std::vector<GridFunction> fs = {GridFunction::from_staircase(a)};
    const std::vector<int> exps = {1};
    const GridSeries s = GridSeries::one_minus_terms(fs, exps, 3);
    const TruncatedSeries e = s.expect();
    CHECK(e.coeff(0) == Rat(1));
    CHECK(e.coeff(1) == -a.expect());
    CHECK(e.coeff(2) == Rat(0));
}
