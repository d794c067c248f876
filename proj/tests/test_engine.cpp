#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fkg/engine.hpp"
#include "fkg/errors.hpp"
#include "fkg/lattice.hpp"
#include "fkg/oracle.hpp"
#include "fkg/rational.hpp"
#include "fkg/sampling.hpp"

#include "oracle_helpers.hpp"

#include <algorithm>
#include <map>
#include <vector>

using namespace fkg;

namespace {

std::vector<StaircaseSeq> random_tuple(Rng& rng, int m, int n) {
    std::vector<StaircaseSeq> fs;
    fs.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) fs.push_back(sample_staircase(rng, m));
    return fs;
}

} // namespace

TEST_CASE("oracle moments agree with direct cell counts") {
    Rng rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        const std::vector<StaircaseSeq> fs = random_tuple(rng, 4, 4);
        const ExpectationOracle oracle = oracle_from_staircases(fs);
        REQUIRE(oracle.arity() == 4);
        for (SubsetMask mask = 1; mask < 16; ++mask) {
            std::vector<int> idx;
            for (int l = 0; l < 4; ++l)
                if (mask & (SubsetMask{1} << l)) idx.push_back(l);
            CHECK(oracle.moment(mask) == ref::moment(std::span<const StaircaseSeq>(fs), idx));
        }
    }
}

TEST_CASE("oracle arity limit") {
    CHECK_THROWS_AS(oracle_from_staircases(
                        std::vector<StaircaseSeq>(25, StaircaseSeq::full(2))),
                    BudgetError);
}

TEST_CASE("permutation stream yields n! cycle decompositions") {
    for (int n = 1; n <= 6; ++n) {
        PermutationCycleStream stream(n);
        CycleDecomposition sigma;
        std::uint64_t count = 0;
        std::map<int, std::uint64_t> by_cycles;
        while (stream.next(sigma)) {
            ++count;
            ++by_cycles[sigma.cycle_count()];
        }
        CHECK(count == factorial_u64(n));
        if (n == 4) {
            // S_4 grouped by cycle count: 6 four-cycles; 8 of type 3+1 plus
            // 3 of type 2+2; 6 transpositions; the identity.
            CHECK(by_cycles[1] == 6);
            CHECK(by_cycles[2] == 11);
            CHECK(by_cycles[3] == 6);
            CHECK(by_cycles[4] == 1);
        }
    }
    CHECK_THROWS_AS(PermutationCycleStream(kNaiveCap + 1), BudgetError);
}

TEST_CASE("set partition stream yields Bell(n) partitions") {
    CHECK(bell_number(3) == 5);
    CHECK(bell_number(4) == 15);
    CHECK(bell_number(10) == 115975);
    for (int n = 1; n <= 8; ++n) {
        SetPartitionStream stream(n);
        SetPartition pi;
        std::uint64_t count = 0;
        while (stream.next(pi)) {
            ++count;
            SubsetMask all = 0;
            for (const SubsetMask block : pi.blocks) {
                CHECK(block != 0);
                CHECK((all & block) == 0);
                all |= block;
            }
            CHECK(all == (SubsetMask{1} << n) - 1);
        }
        CHECK(count == bell_number(n));
    }
    CHECK_THROWS_AS(SetPartitionStream(kPartitionCap + 1), BudgetError);
}

TEST_CASE("two- and three-argument values match the literal formulas") {
    Rng rng(202);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<StaircaseSeq> pair = random_tuple(rng, 4, 2);
        const ExpectationOracle o2 = oracle_from_staircases(pair);
        const Rat expected2 = ref::e2(pair[0], pair[1]);
        CHECK(en_naive(o2).value == expected2);
        CHECK(en_partition(o2).value == expected2);
        CHECK(en_recursive(o2).value == expected2);

        const std::vector<StaircaseSeq> triple = random_tuple(rng, 4, 3);
        const ExpectationOracle o3 = oracle_from_staircases(triple);
        const Rat expected3 = ref::e3(triple[0], triple[1], triple[2]);
        CHECK(en_naive(o3).value == expected3);
        CHECK(en_partition(o3).value == expected3);
        CHECK(en_recursive(o3).value == expected3);

        CHECK(kappa3(o3) == ref::kappa3(triple[0], triple[1], triple[2]));
    }
}

TEST_CASE("backends agree with the permutation definition up to n=6") {
    Rng rng(303);
    for (int n = 2; n <= 6; ++n) {
        for (int trial = 0; trial < 8; ++trial) {
            const std::vector<StaircaseSeq> fs = random_tuple(rng, 3, n);
            const Rat reference = ref::en_bruteforce(std::span<const StaircaseSeq>(fs));
            const ExpectationOracle oracle = oracle_from_staircases(fs);
            CHECK(en_naive(oracle).value == reference);
            CHECK(en_partition(oracle).value == reference);
            CHECK(en_recursive(oracle).value == reference);
        }
    }
}

TEST_CASE("term counts follow the combinatorics") {
    const std::vector<StaircaseSeq> fs = {StaircaseSeq(2, {2, 1}), StaircaseSeq(2, {1, 1}),
                                          StaircaseSeq(2, {2, 2}), StaircaseSeq(2, {1, 0})};
    const ExpectationOracle oracle = oracle_from_staircases(fs);
    CHECK(en_naive(oracle).term_count == 24);
    CHECK(en_partition(oracle).term_count == 15);
    CHECK(en_naive(oracle).backend == Backend::naive);
    CHECK(en_partition(oracle).backend == Backend::partition);
    CHECK(en_recursive(oracle).backend == Backend::recursive);
    CHECK(backend_from_name("naive") == Backend::naive);
    CHECK(backend_name(Backend::recursive) == "recursive");
    CHECK_THROWS_AS(backend_from_name("fast"), InputError);
}

TEST_CASE("permutation definition is symmetric in its arguments") {
    Rng rng(404);
    const std::vector<StaircaseSeq> fs = random_tuple(rng, 3, 4);
    const ExpectationOracle oracle = oracle_from_staircases(fs);
    const Rat base = en_partition(oracle).value;
    CHECK(en_partition(oracle.permuted(std::vector<int>{2, 1, 4, 3})).value == base);
    CHECK(en_partition(oracle.permuted(std::vector<int>{4, 3, 2, 1})).value == base);
}

TEST_CASE("partial cycle sums recombine to the full value") {
    // Summing P_c over every cycle c through element n, weighted by the
    // number of cyclic orders, reproduces the merge recursion; spot-check
    // the two defining cases instead.
    Rng rng(505);
    const std::vector<StaircaseSeq> fs = random_tuple(rng, 3, 3);
    const ExpectationOracle oracle = oracle_from_staircases(fs);

    const int full_cycle[] = {1, 2, 3};
    CHECK(partial_cycle_sum(oracle, full_cycle) == oracle.moment(0b111));

    const int just3[] = {3};
    // Complement {1,2}: P = -E(f3) * E_2(f1,f2).
    const ExpectationOracle rest = oracle.restrict_to(std::vector<int>{1, 2});
    CHECK(partial_cycle_sum(oracle, just3) ==
          -oracle.moment(0b100) * en_partition(rest).value);

    CHECK_THROWS_AS(partial_cycle_sum(oracle, std::vector<int>{}), InputError);
    CHECK_THROWS_AS(partial_cycle_sum(oracle, std::vector<int>{1, 1}), InputError);
    CHECK_THROWS_AS(partial_cycle_sum(oracle, std::vector<int>{4}), InputError);
}

TEST_CASE("closed form for sorted constant levels") {
    // alpha(1-beta)(2-gamma) at (1/4, 1/2, 3/4).
    const std::vector<Rat> levels = {Rat(1, 4), Rat(1, 2), Rat(3, 4)};
    CHECK(en_constant_closed_form(levels) == Rat(5, 32));

    // All-ones quadruple vanishes: 1*(1-1)*(2-1)*(3-1) = 0.
    const std::vector<Rat> ones(4, Rat(1));
    CHECK(en_constant_closed_form(ones) == Rat(0));

    CHECK_THROWS_WITH_AS(en_constant_closed_form(std::vector<Rat>{Rat(1, 2), Rat(1, 4)}),
                         doctest::Contains("not weakly increasing at index 2"), InputError);
    CHECK_THROWS_WITH_AS(en_constant_closed_form(std::vector<Rat>{Rat(3, 2)}),
                         doctest::Contains("out of range [0,1] at index 1"), InputError);
    CHECK_THROWS_AS(en_constant_closed_form(std::vector<Rat>{}), InputError);

    // Against the engine: constant staircases at sorted levels.
    Rng rng(606);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 4;
        std::vector<int> heights;
        for (int j = 0; j < 3; ++j) heights.push_back(rng.below_int(m + 1));
        std::sort(heights.begin(), heights.end());
        std::vector<StaircaseSeq> fs;
        std::vector<Rat> sorted_levels;
        for (const int h : heights) {
            fs.push_back(StaircaseSeq::constant(m, h));
            sorted_levels.push_back(make_rat(h, m));
        }
        const ExpectationOracle oracle = oracle_from_staircases(fs);
        CHECK(en_naive(oracle).value == en_constant_closed_form(sorted_levels));
    }
}

TEST_CASE("unit argument reduces the arity") {
    Rng rng(707);
    for (int n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            const std::vector<StaircaseSeq> fs = random_tuple(rng, 3, n - 1);
            const ExpectationOracle base = oracle_from_staircases(fs);
            const Rat with_unit = en_with_unit(base);
            CHECK(with_unit == Rat(n - 2) * en_partition(base).value);
            // And directly through a full-square staircase as the last slot.
            std::vector<StaircaseSeq> padded = fs;
            padded.push_back(StaircaseSeq::full(3));
            CHECK(en_partition(oracle_from_staircases(padded)).value == with_unit);
        }
    }
}

TEST_CASE("kappa3 witness value") {
    const StaircaseSeq a(2, {2, 1});
    const std::vector<StaircaseSeq> fs = {a, a, a};
    const ExpectationOracle oracle = oracle_from_staircases(fs);
    CHECK(kappa3(oracle) == Rat(-3, 32));
    CHECK(ref::kappa3(a, a, a) == Rat(-3, 32));
    // For an indicator of measure p the cumulant is p(1-p)(1-2p); p = 3/4.
    const Rat p = a.expect();
    CHECK(p == Rat(3, 4));
    CHECK(p * (Rat(1) - p) * (Rat(1) - Rat(2) * p) == Rat(-3, 32));
    CHECK_THROWS_AS(kappa3(oracle.restrict_to(std::vector<int>{1, 2})), InputError);
}

TEST_CASE("naive backend refuses past its cap") {
    const std::vector<StaircaseSeq> fs(10, StaircaseSeq(2, {2, 1}));
    const ExpectationOracle oracle = oracle_from_staircases(fs);
    CHECK_THROWS_AS(en_naive(oracle), BudgetError);
    CHECK_NOTHROW(en_recursive(oracle));
}
