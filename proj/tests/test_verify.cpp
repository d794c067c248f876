#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fkg/engine.hpp"
#include "fkg/errors.hpp"
#include "fkg/lattice.hpp"
#include "fkg/oracle.hpp"
#include "fkg/rational.hpp"
#include "fkg/verify.hpp"

#include "oracle_helpers.hpp"

#include <vector>

using namespace fkg;

TEST_CASE("multiset counts") {
    CHECK(multiset_count(6, 2) == 21);
    CHECK(multiset_count(6, 4) == 126);
    CHECK(multiset_count(20, 3) == 1540);
    CHECK(multiset_count(1, 5) == 1);
}

TEST_CASE("exhaustive scan covers every sorted tuple") {
    const ScanReport report = exhaustive_scan(2, 2, ScanTarget::en);
    CHECK(report.kind == "exhaustive");
    CHECK(report.target == "en");
    CHECK(report.tuple_count == 21);
    CHECK(report.ordered_count == 36);
    CHECK(report.min_value == Rat(0));
    CHECK(report.violation_total == 0);
    CHECK_FALSE(report.randomized);
    CHECK(report.argmin_total > 0);
    for (const StairTupleRecord& rec : report.stair_argmin) {
        REQUIRE(rec.seqs.size() == 2);
        const ExpectationOracle oracle = oracle_from_staircases(rec.seqs);
        CHECK(en_partition(oracle).value == Rat(0));
    }
}

TEST_CASE("exhaustive scan agrees with the brute-force reference") {
    const ScanReport report = exhaustive_scan(2, 3, ScanTarget::en);
    Rat min_ref;
    bool first = true;
    const auto all = enumerate_staircases(2);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i; j < all.size(); ++j)
            for (std::size_t l = j; l < all.size(); ++l) {
                const std::vector<StaircaseSeq> fs = {all[i], all[j], all[l]};
                const Rat value = ref::en_bruteforce(std::span<const StaircaseSeq>(fs));
                CHECK(value >= Rat(0));
                if (first || value < min_ref) {
                    min_ref = value;
                    first = false;
                }
            }
    CHECK(report.min_value == min_ref);
    CHECK(report.tuple_count == 56);
}

TEST_CASE("kappa3 scan finds the negative witness") {
    const ScanReport report = exhaustive_scan(2, 3, ScanTarget::kappa3);
    CHECK(report.target == "kappa3");
    CHECK(report.min_value <= Rat(-3, 32));
    CHECK(report.violation_total > 0);
    CHECK_THROWS_AS(exhaustive_scan(2, 4, ScanTarget::kappa3), InputError);
}

TEST_CASE("budget refusal is total, not a truncation") {
    ScanOptions opts;
    opts.budget = 10;
    CHECK_THROWS_AS(exhaustive_scan(3, 3, ScanTarget::en, opts), BudgetError);
}

TEST_CASE("random scans are worker-invariant") {
    ScanOptions serial;
    serial.workers = 1;
    ScanOptions parallel;
    parallel.workers = 4;
    const ScanReport a = random_scan(3, 3, 300, 99, serial);
    const ScanReport b = random_scan(3, 3, 300, 99, parallel);
    CHECK(a.min_value == b.min_value);
    CHECK(a.tuple_count == b.tuple_count);
    CHECK(a.argmin_total == b.argmin_total);
    REQUIRE(a.stair_argmin.size() == b.stair_argmin.size());
    for (std::size_t i = 0; i < a.stair_argmin.size(); ++i) {
        CHECK(a.stair_argmin[i].seqs == b.stair_argmin[i].seqs);
        CHECK(a.stair_argmin[i].trial == b.stair_argmin[i].trial);
    }
    CHECK(a.violation_total == 0);
    CHECK(a.randomized);
    CHECK(a.seed == 99);
}

TEST_CASE("random scan values match direct evaluation") {
    const ScanReport report = random_scan(2, 3, 50, 7);
    for (const StairTupleRecord& rec : report.stair_argmin) {
        const ExpectationOracle oracle = oracle_from_staircases(rec.seqs);
        CHECK(en_partition(oracle).value == rec.value);
        CHECK(rec.value == report.min_value);
    }
}

TEST_CASE("rectangle scans stay nonnegative and worker-invariant") {
    ScanOptions serial;
    ScanOptions parallel;
    parallel.workers = 3;
    const ScanReport a = rectangle_scan(2, 3, 60, 31, serial);
    const ScanReport b = rectangle_scan(2, 3, 60, 31, parallel);
    CHECK(a.kind == "rectangles");
    CHECK(a.k == 2);
    CHECK(a.violation_total == 0);
    CHECK(a.min_value >= Rat(0));
    CHECK(a.min_value == b.min_value);
    REQUIRE(a.rect_argmin.size() == b.rect_argmin.size());
    for (std::size_t i = 0; i < a.rect_argmin.size(); ++i)
        CHECK(a.rect_argmin[i].corners == b.rect_argmin[i].corners);
}

TEST_CASE("proposition names round-trip") {
    for (const PropId prop : all_props()) CHECK(prop_from_name(prop_name(prop)) == prop);
    CHECK_THROWS_AS(prop_from_name("nonsense"), InputError);
    CHECK(prop_name(PropId::meet_star) == "meet-star");
    CHECK(prop_name(PropId::a_n) == "A_n");
}

TEST_CASE("averaging check passes exhaustively") {
    const PropCheckReport report = check_proposition(PropId::averaging, 2, 3);
    CHECK(report.failure_total == 0);
    CHECK(report.instances_checked > 0);
    CHECK_FALSE(report.randomized);
}

TEST_CASE("star and meet-star and apmb checks pass") {
    CHECK(check_proposition(PropId::star, 2, 3).failure_total == 0);
    CHECK(check_proposition(PropId::b_n, 2, 3).failure_total == 0);
    CHECK(check_proposition(PropId::meet_star, 3, 2).failure_total == 0);
    CHECK(check_proposition(PropId::apmb, 3, 2).failure_total == 0);
}

TEST_CASE("disjoint-support check passes at the small sizes") {
    const PropCheckReport report = check_proposition(PropId::a_n, 2, 3);
    CHECK(report.failure_total == 0);
    CHECK(report.instances_checked > 0);
    CHECK_THROWS_AS(check_proposition(PropId::a_n, 3, 3), BudgetError);
}

TEST_CASE("branching check is randomized and seed-stable") {
    PropOptions opts;
    opts.trials = 50;
    opts.seed = 5;
    const PropCheckReport a = check_proposition(PropId::branching, 3, 4, opts);
    CHECK(a.failure_total == 0);
    CHECK(a.randomized);
    CHECK(a.trials == 50);
    opts.workers = 4;
    const PropCheckReport b = check_proposition(PropId::branching, 3, 4, opts);
    CHECK(b.instances_checked == a.instances_checked);
}

TEST_CASE("proposition budget refusal") {
    PropOptions opts;
    opts.budget = 1;
    CHECK_THROWS_AS(check_proposition(PropId::averaging, 3, 4, opts), BudgetError);
}

TEST_CASE("averaging identity holds on hand-picked instances") {
    // A direct instance of the identity the checker enumerates: others flat
    // at the descent. a = (2,0) has a descent at 1; b = (2,2) does not.
    const StaircaseSeq a(2, {2, 0});
    const StaircaseSeq b(2, {2, 2});
    const std::vector<StaircaseSeq> mid = {b, a};
    const std::vector<StaircaseSeq> up = {b, perturb(a, 1, PerturbKind::plus)};
    const std::vector<StaircaseSeq> down = {b, perturb(a, 1, PerturbKind::minus)};
    const Rat two_mid = Rat(2) * ref::en_bruteforce(std::span<const StaircaseSeq>(mid));
    const Rat sum = ref::en_bruteforce(std::span<const StaircaseSeq>(up)) +
                    ref::en_bruteforce(std::span<const StaircaseSeq>(down));
    CHECK(two_mid == sum);
}

TEST_CASE("argmin structure at the smallest sizes") {
    const ArgminReport report = argmin_structure(2, 3);
    CHECK(report.min_value == Rat(0));
    CHECK(report.all_constant);
    CHECK(report.extremal_total > 0);
    CHECK(report.extremal_total <= report.argmin_total);
    for (const StairTupleRecord& rec : report.extremal)
        for (const StaircaseSeq& s : rec.seqs) CHECK(s.is_constant());
    // lambda restricted to the argmin set never exceeds the reported max.
    for (const StairTupleRecord& rec : report.extremal) {
        Rat lambda(0);
        for (const StaircaseSeq& s : rec.seqs) lambda += s.expect();
        CHECK(lambda == report.lambda_max);
    }
}
