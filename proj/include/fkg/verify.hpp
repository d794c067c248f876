#pragma once

#include "fkg/engine.hpp"
#include "fkg/lattice.hpp"
#include "fkg/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fkg {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;
inline constexpr std::size_t kReportCap = 100;  // listed records; totals stay exact

// All of A(m), ascending lexicographic order. |A(m)| = C(2m, m).
std::vector<StaircaseSeq> enumerate_staircases(int m);

// Number of sorted n-tuples over a ground set of s elements: C(s+n-1, n).
Int multiset_count(std::uint64_t s, int n);

enum class ScanTarget { en, kappa3 };

std::string scan_target_name(ScanTarget t);
ScanTarget scan_target_from_name(const std::string& name);

// One recorded tuple: the canonical (ascending) sequences and the exact
// value; trial is the 1-based trial index for randomized scans, 0 otherwise.
struct StairTupleRecord {
    std::vector<StaircaseSeq> seqs;
    Rat value;
    std::uint64_t trial = 0;
};

struct RectTupleRecord {
    std::vector<std::vector<Rat>> corners;
    Rat value;
    std::uint64_t trial = 0;
};

struct ScanOptions {
    std::uint64_t budget = kDefaultBudget;
    int workers = 1;
    std::size_t report_cap = kReportCap;
};

struct ScanReport {
    std::string kind;    // "exhaustive" | "random" | "rectangles"
    std::string target;  // "en" | "kappa3"
    int m = 0;           // grid resolution (staircase scans)
    int k = 0;           // ambient dimension (rectangle scans)
    int n = 0;
    std::uint64_t trials = 0;         // randomized scans
    std::uint64_t seed = 0;
    bool randomized = false;
    std::uint64_t tuple_count = 0;    // instances actually evaluated
    Int ordered_count;                // |A(m)|^n for exhaustive scans
    Rat min_value;
    std::vector<StairTupleRecord> stair_argmin;
    std::vector<StairTupleRecord> stair_violations;
    std::vector<RectTupleRecord> rect_argmin;
    std::vector<RectTupleRecord> rect_violations;
    std::uint64_t argmin_total = 0;
    std::uint64_t violation_total = 0;
    std::uint64_t budget = 0;
    std::size_t report_cap = kReportCap;
    double elapsed_seconds = 0;  // informational only, never serialized
};

// Every sorted n-tuple over A(m); target kappa3 requires n = 3. Refuses
// (never truncates) when the multiset count exceeds the budget.
ScanReport exhaustive_scan(int m, int n, ScanTarget target, const ScanOptions& opts = {});

// Uniform random tuples from A(m)^n, one derived RNG stream per trial, so
// the report depends only on (m, n, trials, seed).
ScanReport random_scan(int m, int n, std::uint64_t trials, std::uint64_t seed,
                       const ScanOptions& opts = {});

// Random rational down-rectangles in [0,1]^k.
ScanReport rectangle_scan(int k, int n, std::uint64_t trials, std::uint64_t seed,
                          const ScanOptions& opts = {});

enum class PropId { averaging, star, meet_star, apmb, a_n, b_n, branching };

std::string prop_name(PropId p);
PropId prop_from_name(const std::string& name);
std::vector<PropId> all_props();

struct PropFailure {
    std::vector<StaircaseSeq> seqs;         // the instance, slot order
    std::vector<std::pair<int, int>> cells; // subset S for the disjoint-support check
    int index = 0;                          // descent position i, when relevant
    std::uint64_t trial = 0;                // randomized checks
    std::string note;                       // exact values that disagreed
};

struct PropOptions {
    std::uint64_t budget = kDefaultBudget;
    int workers = 1;
    std::uint64_t trials = 200;  // randomized checks only
    std::uint64_t seed = 0;
    std::size_t report_cap = kReportCap;
};

struct PropCheckReport {
    PropId prop = PropId::averaging;
    int m = 0;
    int n = 0;
    std::uint64_t instances_checked = 0;
    std::uint64_t trials = 0;  // nonzero for randomized checks
    std::uint64_t seed = 0;
    bool randomized = false;
    std::vector<PropFailure> failures;
    std::uint64_t failure_total = 0;
    std::uint64_t budget = 0;
    std::size_t report_cap = kReportCap;
    double elapsed_seconds = 0;
};

// Exhaustive check of one identity/inequality over all admissible (m, n)
// instances; branching uses seeded random instances instead. Failure lists
// are expected to stay empty: a nonempty list is an implementation bug.
PropCheckReport check_proposition(PropId prop, int m, int n, const PropOptions& opts = {});

struct ArgminReport {
    int m = 0;
    int n = 0;
    std::uint64_t tuple_count = 0;
    Rat min_value;
    std::uint64_t argmin_total = 0;
    Rat lambda_max;  // max of E(a^1)+...+E(a^n) over the argmin set
    std::vector<StairTupleRecord> extremal;  // argmin and lambda-maximal
    std::uint64_t extremal_total = 0;
    bool all_constant = false;
    std::uint64_t budget = 0;
    std::size_t report_cap = kReportCap;
    double elapsed_seconds = 0;
};

// Scans all sorted tuples, intersects the E_n argmin set with the lambda
// maximizers, and checks that every surviving tuple is all-constant.
ArgminReport argmin_structure(int m, int n, const ScanOptions& opts = {});

} // namespace fkg
