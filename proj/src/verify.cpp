#include "fkg/verify.hpp"

#include "fkg/errors.hpp"
#include "fkg/oracle.hpp"
#include "fkg/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

namespace fkg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Per-chunk scan state; merged strictly in chunk order so reports do not
// depend on scheduling.
template <typename R>
struct Accum {
    bool any = false;
    Rat min_value;
    std::vector<R> argmin;
    std::uint64_t argmin_total = 0;
    std::vector<R> violations;
    std::uint64_t violation_total = 0;
    std::uint64_t evaluated = 0;

    void add(R rec, std::size_t cap) {
        ++evaluated;
        if (rec.value < 0) {
            ++violation_total;
            if (violations.size() < cap) violations.push_back(rec);
        }
        if (!any || rec.value < min_value) {
            any = true;
            min_value = rec.value;
            argmin.clear();
            argmin_total = 1;
            if (cap > 0) argmin.push_back(std::move(rec));
        } else if (rec.value == min_value) {
            ++argmin_total;
            if (argmin.size() < cap) argmin.push_back(std::move(rec));
        }
    }

    void merge(Accum&& other, std::size_t cap) {
        evaluated += other.evaluated;
        violation_total += other.violation_total;
        for (auto& v : other.violations) {
            if (violations.size() < cap) violations.push_back(std::move(v));
        }
        if (!other.any) return;
        if (!any || other.min_value < min_value) {
            any = true;
            min_value = std::move(other.min_value);
            argmin = std::move(other.argmin);
            argmin_total = other.argmin_total;
        } else if (other.min_value == min_value) {
            argmin_total += other.argmin_total;
            for (auto& a : other.argmin) {
                if (argmin.size() < cap) argmin.push_back(std::move(a));
            }
        }
    }
};

template <typename R, typename Fn>
Accum<R> run_chunked(std::size_t chunk_count, int workers, std::size_t cap, Fn&& chunk_fn) {
    Accum<R> total;
    if (workers <= 1 || chunk_count <= 1) {
        for (std::size_t c = 0; c < chunk_count; ++c) total.merge(chunk_fn(c), cap);
        return total;
    }
    std::vector<Accum<R>> parts(chunk_count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    const auto work = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunk_count) return;
            try {
                parts[c] = chunk_fn(c);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t thread_count =
        std::min<std::size_t>(static_cast<std::size_t>(workers), chunk_count);
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    for (auto& p : parts) total.merge(std::move(p), cap);
    return total;
}

// Visits every nondecreasing index tuple with idx[0] = first fixed.
template <typename Visit>
void for_each_tail(std::size_t ground_size, int n, std::size_t first, Visit&& visit) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(n));
    idx[0] = first;
    std::function<void(int)> rec = [&](int pos) {
        if (pos == n) {
            visit(idx);
            return;
        }
        for (std::size_t v = idx[static_cast<std::size_t>(pos) - 1]; v < ground_size; ++v) {
            idx[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1);
        }
    };
    rec(1);
}

std::vector<StaircaseSeq> pick(const std::vector<StaircaseSeq>& ground,
                               const std::vector<std::size_t>& idx) {
    std::vector<StaircaseSeq> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(ground[i]);
    return out;
}

void require_budget(const Int& instances, std::uint64_t budget, const std::string& what) {
    if (instances > Int(static_cast<unsigned long>(budget))) {
        throw BudgetError(what + ": " + instances.get_str() + " instances exceed budget " +
                          std::to_string(budget));
    }
}

std::uint64_t trial_chunk_count(std::uint64_t trials, std::uint64_t block) {
    return (trials + block - 1) / block;
}

// Fixed block size so chunk boundaries never depend on the worker count.
constexpr std::uint64_t kTrialBlock = 256;

} // namespace

std::vector<StaircaseSeq> enumerate_staircases(int m) {
    if (m < 1) throw InputError("enumerate: resolution must be positive");
    std::vector<StaircaseSeq> out;
    std::vector<int> cur(static_cast<std::size_t>(m));
    std::function<void(int, int)> rec = [&](int pos, int ub) {
        if (pos == m) {
            out.emplace_back(m, cur);
            return;
        }
        for (int v = 0; v <= ub; ++v) {
            cur[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, v);
        }
    };
    rec(0, m);
    return out;
}

Int multiset_count(std::uint64_t s, int n) {
    if (n < 1) throw InputError("multiset count: n must be at least 1");
    Int c;
    mpz_bin_uiui(c.get_mpz_t(), s + static_cast<unsigned long>(n) - 1,
                 static_cast<unsigned long>(n));
    return c;
}

std::string scan_target_name(ScanTarget t) {
    return t == ScanTarget::en ? "en" : "kappa3";
}

ScanTarget scan_target_from_name(const std::string& name) {
    if (name == "en") return ScanTarget::en;
    if (name == "kappa3") return ScanTarget::kappa3;
    throw InputError("unknown scan target '" + name + "' (expected en or kappa3)");
}

ScanReport exhaustive_scan(int m, int n, ScanTarget target, const ScanOptions& opts) {
    const auto t0 = Clock::now();
    if (n < 1) throw InputError("scan: n must be at least 1");
    if (target == ScanTarget::kappa3 && n != 3)
        throw InputError("scan: kappa3 target requires n = 3");
    const std::vector<StaircaseSeq> ground = enumerate_staircases(m);
    const std::uint64_t s = ground.size();
    const Int total = multiset_count(s, n);
    require_budget(total, opts.budget, "scan");

    const auto chunk_fn = [&](std::size_t first) {
        Accum<StairTupleRecord> acc;
        for_each_tail(s, n, first, [&](const std::vector<std::size_t>& idx) {
            std::vector<StaircaseSeq> tuple = pick(ground, idx);
            const ExpectationOracle oracle = oracle_from_staircases(tuple);
            Rat value = target == ScanTarget::en ? en_partition(oracle).value : kappa3(oracle);
            acc.add(StairTupleRecord{std::move(tuple), std::move(value), 0}, opts.report_cap);
        });
        return acc;
    };
    Accum<StairTupleRecord> acc =
        run_chunked<StairTupleRecord>(s, opts.workers, opts.report_cap, chunk_fn);

    ScanReport report;
    report.kind = "exhaustive";
    report.target = scan_target_name(target);
    report.m = m;
    report.n = n;
    report.tuple_count = acc.evaluated;
    mpz_ui_pow_ui(report.ordered_count.get_mpz_t(), s, static_cast<unsigned long>(n));
    report.min_value = std::move(acc.min_value);
    report.stair_argmin = std::move(acc.argmin);
    report.stair_violations = std::move(acc.violations);
    report.argmin_total = acc.argmin_total;
    report.violation_total = acc.violation_total;
    report.budget = opts.budget;
    report.report_cap = opts.report_cap;
    report.elapsed_seconds = seconds_since(t0);
    return report;
}

ScanReport random_scan(int m, int n, std::uint64_t trials, std::uint64_t seed,
                       const ScanOptions& opts) {
    const auto t0 = Clock::now();
    if (n < 1) throw InputError("scan: n must be at least 1");
    if (m < 1) throw InputError("scan: resolution must be positive");
    if (trials < 1) throw InputError("scan: trials must be at least 1");
    require_budget(Int(static_cast<unsigned long>(trials)), opts.budget, "scan");

    const std::uint64_t chunks = trial_chunk_count(trials, kTrialBlock);
    const auto chunk_fn = [&](std::size_t chunk) {
        Accum<StairTupleRecord> acc;
        const std::uint64_t lo = static_cast<std::uint64_t>(chunk) * kTrialBlock + 1;
        const std::uint64_t hi = std::min(trials, lo + kTrialBlock - 1);
        for (std::uint64_t t = lo; t <= hi; ++t) {
            Rng rng = Rng::for_stream(seed, t);
            std::vector<StaircaseSeq> tuple;
            tuple.reserve(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) tuple.push_back(sample_staircase(rng, m));
            std::sort(tuple.begin(), tuple.end());
            const ExpectationOracle oracle = oracle_from_staircases(tuple);
            Rat value = en_partition(oracle).value;
            acc.add(StairTupleRecord{std::move(tuple), std::move(value), t}, opts.report_cap);
        }
        return acc;
    };
    Accum<StairTupleRecord> acc = run_chunked<StairTupleRecord>(
        static_cast<std::size_t>(chunks), opts.workers, opts.report_cap, chunk_fn);

    ScanReport report;
    report.kind = "random";
    report.target = "en";
    report.m = m;
    report.n = n;
    report.trials = trials;
    report.seed = seed;
    report.randomized = true;
    report.tuple_count = acc.evaluated;
    report.min_value = std::move(acc.min_value);
    report.stair_argmin = std::move(acc.argmin);
    report.stair_violations = std::move(acc.violations);
    report.argmin_total = acc.argmin_total;
    report.violation_total = acc.violation_total;
    report.budget = opts.budget;
    report.report_cap = opts.report_cap;
    report.elapsed_seconds = seconds_since(t0);
    return report;
}

ScanReport rectangle_scan(int k, int n, std::uint64_t trials, std::uint64_t seed,
                          const ScanOptions& opts) {
    const auto t0 = Clock::now();
    if (k < 1) throw InputError("scan: dimension must be positive");
    if (n < 1) throw InputError("scan: n must be at least 1");
    if (trials < 1) throw InputError("scan: trials must be at least 1");
    require_budget(Int(static_cast<unsigned long>(trials)), opts.budget, "scan");

    const std::uint64_t chunks = trial_chunk_count(trials, kTrialBlock);
    const auto chunk_fn = [&](std::size_t chunk) {
        Accum<RectTupleRecord> acc;
        const std::uint64_t lo = static_cast<std::uint64_t>(chunk) * kTrialBlock + 1;
        const std::uint64_t hi = std::min(trials, lo + kTrialBlock - 1);
        for (std::uint64_t t = lo; t <= hi; ++t) {
            Rng rng = Rng::for_stream(seed, t);
            std::vector<std::vector<Rat>> corners;
            corners.reserve(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) corners.push_back(sample_rect_corner(rng, k));
            const RectangleFamily fam(k, corners);
            const ExpectationOracle oracle = oracle_from_rectangles(fam);
            Rat value = en_partition(oracle).value;
            acc.add(RectTupleRecord{std::move(corners), std::move(value), t}, opts.report_cap);
        }
        return acc;
    };
    Accum<RectTupleRecord> acc = run_chunked<RectTupleRecord>(
        static_cast<std::size_t>(chunks), opts.workers, opts.report_cap, chunk_fn);

    ScanReport report;
    report.kind = "rectangles";
    report.target = "en";
    report.k = k;
    report.n = n;
    report.trials = trials;
    report.seed = seed;
    report.randomized = true;
    report.tuple_count = acc.evaluated;
    report.min_value = std::move(acc.min_value);
    report.rect_argmin = std::move(acc.argmin);
    report.rect_violations = std::move(acc.violations);
    report.argmin_total = acc.argmin_total;
    report.violation_total = acc.violation_total;
    report.budget = opts.budget;
    report.report_cap = opts.report_cap;
    report.elapsed_seconds = seconds_since(t0);
    return report;
}

std::string prop_name(PropId p) {
    switch (p) {
        case PropId::averaging: return "averaging";
        case PropId::star: return "star";
        case PropId::meet_star: return "meet-star";
        case PropId::apmb: return "apmb";
        case PropId::a_n: return "A_n";
        case PropId::b_n: return "B_n";
        case PropId::branching: return "branching";
    }
    throw EngineBug("prop_name: unknown proposition");
}

PropId prop_from_name(const std::string& name) {
    for (PropId p : all_props()) {
        if (prop_name(p) == name) return p;
    }
    throw InputError("unknown proposition '" + name +
                     "' (expected averaging, star, meet-star, apmb, A_n, B_n, or branching)");
}

std::vector<PropId> all_props() {
    return {PropId::averaging, PropId::star,      PropId::meet_star, PropId::apmb,
            PropId::a_n,       PropId::b_n,       PropId::branching};
}

namespace {

void record_failure(PropCheckReport& report, PropFailure failure, std::size_t cap) {
    ++report.failure_total;
    if (report.failures.size() < cap) report.failures.push_back(std::move(failure));
}

// 2 E_n(a^1..a^{n-1}, a) = E_n(..., a+) + E_n(..., a-) whenever a has a
// descent at i and none of the others do.
PropCheckReport check_averaging(int m, int n, const PropOptions& opts) {
    if (n < 2) throw InputError("averaging: n must be at least 2");
    if (m < 2) throw InputError("averaging: resolution 1 has no descents");
    const std::vector<StaircaseSeq> ground = enumerate_staircases(m);
    const std::uint64_t s = ground.size();
    require_budget(multiset_count(s, n - 1) * Int(static_cast<unsigned long>(s)) * (m - 1),
                   opts.budget, "averaging");

    PropCheckReport report;
    report.prop = PropId::averaging;
    report.m = m;
    report.n = n;
    for (std::size_t first = 0; first < s; ++first) {
        for_each_tail(s, n - 1, first, [&](const std::vector<std::size_t>& idx) {
            const std::vector<StaircaseSeq> base = pick(ground, idx);
            for (const StaircaseSeq& a : ground) {
                for (int i = 1; i < m; ++i) {
                    if (!a.has_descent_at(i)) continue;
                    bool others_flat = true;
                    for (const StaircaseSeq& b : base) {
                        if (b.has_descent_at(i)) {
                            others_flat = false;
                            break;
                        }
                    }
                    if (!others_flat) continue;
                    ++report.instances_checked;
                    std::vector<StaircaseSeq> tuple = base;
                    tuple.push_back(a);
                    const Rat mid = en_partition(oracle_from_staircases(tuple)).value;
                    tuple.back() = perturb(a, i, PerturbKind::plus);
                    const Rat up = en_partition(oracle_from_staircases(tuple)).value;
                    tuple.back() = perturb(a, i, PerturbKind::minus);
                    const Rat down = en_partition(oracle_from_staircases(tuple)).value;
                    if (2 * mid != up + down) {
                        tuple.back() = a;
                        record_failure(report,
                                       PropFailure{tuple,
                                                   {},
                                                   i,
                                                   0,
                                                   "2*" + rat_to_string(mid) + " != " +
                                                       rat_to_string(up) + " + " +
                                                       rat_to_string(down)},
                                       opts.report_cap);
                    }
                }
            }
        });
    }
    return report;
}

// E_n(a^1..a^{n-2}, b, c*) <= E_n(a^1..a^{n-2}, b, c) whenever b and c share
// a descent at i and b_{i+1} <= c_{i+1}; the star goes on c.
PropCheckReport check_star(PropId id, int m, int n, const PropOptions& opts) {
    if (n < 2) throw InputError("star: n must be at least 2");
    if (m < 2) throw InputError("star: resolution 1 has no descents");
    const std::vector<StaircaseSeq> ground = enumerate_staircases(m);
    const std::uint64_t s = ground.size();
    const Int base_count = n == 2 ? Int(1) : multiset_count(s, n - 2);
    require_budget(base_count * Int(static_cast<unsigned long>(s * s)) * (m - 1), opts.budget,
                   "star");

    PropCheckReport report;
    report.prop = id;
    report.m = m;
    report.n = n;
    const auto run_base = [&](const std::vector<StaircaseSeq>& base) {
        for (const StaircaseSeq& b : ground) {
            for (const StaircaseSeq& c : ground) {
                for (int i = 1; i < m; ++i) {
                    if (!b.has_descent_at(i) || !c.has_descent_at(i)) continue;
                    if (b.value(i + 1) > c.value(i + 1)) continue;
                    ++report.instances_checked;
                    std::vector<StaircaseSeq> tuple = base;
                    tuple.push_back(b);
                    tuple.push_back(c);
                    const Rat plain = en_partition(oracle_from_staircases(tuple)).value;
                    tuple.back() = perturb(c, i, PerturbKind::star);
                    const Rat starred = en_partition(oracle_from_staircases(tuple)).value;
                    if (starred > plain) {
                        tuple.back() = c;
                        record_failure(report,
                                       PropFailure{tuple,
                                                   {},
                                                   i,
                                                   0,
                                                   "starred " + rat_to_string(starred) + " > " +
                                                       rat_to_string(plain)},
                                       opts.report_cap);
                    }
                }
            }
        }
    };
    if (n == 2) {
        run_base({});
    } else {
        for (std::size_t first = 0; first < s; ++first) {
            for_each_tail(s, n - 2, first,
                          [&](const std::vector<std::size_t>& idx) { run_base(pick(ground, idx)); });
        }
    }
    return report;
}

// a* b = ab whenever a and b share a descent at i and b_{i+1} <= a_{i+1}.
PropCheckReport check_meet_star(int m, int n, const PropOptions& opts) {
    if (m < 2) throw InputError("meet-star: resolution 1 has no descents");
    const std::vector<StaircaseSeq> ground = enumerate_staircases(m);
    require_budget(Int(static_cast<unsigned long>(ground.size() * ground.size())) * (m - 1),
                   opts.budget, "meet-star");

    PropCheckReport report;
    report.prop = PropId::meet_star;
    report.m = m;
    report.n = n;
    for (const StaircaseSeq& a : ground) {
        for (const StaircaseSeq& b : ground) {
            for (int i = 1; i < m; ++i) {
                if (!a.has_descent_at(i) || !b.has_descent_at(i)) continue;
                if (b.value(i + 1) > a.value(i + 1)) continue;
                ++report.instances_checked;
                const StaircaseSeq starred = staircase_meet(perturb(a, i, PerturbKind::star), b);
                const StaircaseSeq plain = staircase_meet(a, b);
                if (!(starred == plain)) {
                    record_failure(report, PropFailure{{a, b}, {}, i, 0, "a*b differs from ab"},
                                   opts.report_cap);
                }
            }
        }
    }
    return report;
}

// E(a+ b) + E(a- b) = 2 E(ab) whenever a has a descent at i and b does not.
PropCheckReport check_apmb(int m, int n, const PropOptions& opts) {
    if (m < 2) throw InputError("apmb: resolution 1 has no descents");
    const std::vector<StaircaseSeq> ground = enumerate_staircases(m);
    require_budget(Int(static_cast<unsigned long>(ground.size() * ground.size())) * (m - 1),
                   opts.budget, "apmb");

    PropCheckReport report;
    report.prop = PropId::apmb;
    report.m = m;
    report.n = n;
    for (const StaircaseSeq& a : ground) {
        for (const StaircaseSeq& b : ground) {
            for (int i = 1; i < m; ++i) {
                if (!a.has_descent_at(i) || b.has_descent_at(i)) continue;
                ++report.instances_checked;
                const std::vector<StaircaseSeq> up{perturb(a, i, PerturbKind::plus), b};
                const std::vector<StaircaseSeq> down{perturb(a, i, PerturbKind::minus), b};
                const std::vector<StaircaseSeq> mid{a, b};
                const Rat lhs = product_expect(std::span<const StaircaseSeq>(up)) +
                                product_expect(std::span<const StaircaseSeq>(down));
                const Rat rhs = 2 * product_expect(std::span<const StaircaseSeq>(mid));
                if (lhs != rhs) {
                    record_failure(report,
                                   PropFailure{{a, b},
                                               {},
                                               i,
                                               0,
                                               rat_to_string(lhs) + " != " + rat_to_string(rhs)},
                                   opts.report_cap);
                }
            }
        }
    }
    return report;
}

// E_n(chi_{a^1}..chi_{a^{n-2}}, chi_b, chi_S) <= 0 for every cell set S
// disjoint from S_b. Full subset enumeration, hence the tight caps.
PropCheckReport check_a_n(int m, int n, const PropOptions& opts) {
    if (n < 2) throw InputError("A_n: n must be at least 2");
    if (m > 2 || n > 4) {
        throw BudgetError("A_n: full subset enumeration is capped at m=2, n<=4 (got m=" +
                          std::to_string(m) + ", n=" + std::to_string(n) + ")");
    }
    const std::vector<StaircaseSeq> ground = enumerate_staircases(m);
    const std::uint64_t s = ground.size();
    const Int base_count = n == 2 ? Int(1) : multiset_count(s, n - 2);
    require_budget(base_count * Int(static_cast<unsigned long>(s)) * (1 << (m * m)),
                   opts.budget, "A_n");

    PropCheckReport report;
    report.prop = PropId::a_n;
    report.m = m;
    report.n = n;
    const auto run_base = [&](const std::vector<StaircaseSeq>& base) {
        std::vector<GridIndicator> tuple;
        tuple.reserve(static_cast<std::size_t>(n));
        for (const StaircaseSeq& a : base) tuple.push_back(GridIndicator::from_staircase(a));
        for (const StaircaseSeq& b : ground) {
            const GridIndicator chi_b = GridIndicator::from_staircase(b);
            const GridIndicator free = chi_b.complement();
            std::vector<std::size_t> free_cells;
            for (std::size_t pos = free.bits().find_first();
                 pos != boost::dynamic_bitset<>::npos; pos = free.bits().find_next(pos))
                free_cells.push_back(pos);
            tuple.push_back(chi_b);
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_cells.size());
                 ++mask) {
                boost::dynamic_bitset<> bits(static_cast<std::size_t>(m) * m);
                for (std::size_t t = 0; t < free_cells.size(); ++t)
                    if (mask & (std::uint64_t{1} << t)) bits.set(free_cells[t]);
                const GridIndicator chi_s = indicator_from_bits(m, std::move(bits));
                ++report.instances_checked;
                tuple.push_back(chi_s);
                const Rat value = en_partition(oracle_from_indicators(tuple)).value;
                tuple.pop_back();
                if (value > 0) {
                    std::vector<StaircaseSeq> seqs = base;
                    seqs.push_back(b);
                    record_failure(report,
                                   PropFailure{std::move(seqs), chi_s.sorted_cells(), 0, 0,
                                               "E_n = " + rat_to_string(value) + " > 0"},
                                   opts.report_cap);
                }
            }
            tuple.pop_back();
        }
    };
    if (n == 2) {
        run_base({});
    } else {
        for (std::size_t first = 0; first < s; ++first) {
            for_each_tail(s, n - 2, first,
                          [&](const std::vector<std::size_t>& idx) { run_base(pick(ground, idx)); });
        }
    }
    return report;
}

// E_n(f^1..f^{n-1}, 1) = (n-2) E_{n-1}(f^1..f^{n-1}) on random staircases.
PropCheckReport check_branching(int m, int n, const PropOptions& opts) {
    if (n < 2) throw InputError("branching: n must be at least 2");
    if (m < 1) throw InputError("branching: resolution must be positive");
    if (opts.trials < 1) throw InputError("branching: trials must be at least 1");

    PropCheckReport report;
    report.prop = PropId::branching;
    report.m = m;
    report.n = n;
    report.trials = opts.trials;
    report.seed = opts.seed;
    report.randomized = true;
    for (std::uint64_t t = 1; t <= opts.trials; ++t) {
        Rng rng = Rng::for_stream(opts.seed, t);
        std::vector<StaircaseSeq> tuple;
        tuple.reserve(static_cast<std::size_t>(n) - 1);
        for (int j = 0; j + 1 < n; ++j) tuple.push_back(sample_staircase(rng, m));
        const ExpectationOracle base = oracle_from_staircases(tuple);
        const Rat lhs = en_partition(base.extended_with_unit()).value;
        const Rat rhs = n == 2 ? Rat(0) : Rat(n - 2) * en_partition(base).value;
        ++report.instances_checked;
        if (lhs != rhs) {
            record_failure(report,
                           PropFailure{tuple, {}, 0, t,
                                       rat_to_string(lhs) + " != " + rat_to_string(rhs)},
                           opts.report_cap);
        }
    }
    return report;
}

} // namespace

PropCheckReport check_proposition(PropId prop, int m, int n, const PropOptions& opts) {
    const auto t0 = Clock::now();
    PropCheckReport report;
    switch (prop) {
        case PropId::averaging: report = check_averaging(m, n, opts); break;
        case PropId::star: report = check_star(PropId::star, m, n, opts); break;
        case PropId::meet_star: report = check_meet_star(m, n, opts); break;
        case PropId::apmb: report = check_apmb(m, n, opts); break;
        case PropId::a_n: report = check_a_n(m, n, opts); break;
        case PropId::b_n: report = check_star(PropId::b_n, m, n, opts); break;
        case PropId::branching: report = check_branching(m, n, opts); break;
    }
    report.budget = opts.budget;
    report.report_cap = opts.report_cap;
    report.elapsed_seconds = seconds_since(t0);
    return report;
}

ArgminReport argmin_structure(int m, int n, const ScanOptions& opts) {
    const auto t0 = Clock::now();
    if (n < 1) throw InputError("argmin: n must be at least 1");
    const std::vector<StaircaseSeq> ground = enumerate_staircases(m);
    const std::uint64_t s = ground.size();
    require_budget(multiset_count(s, n), opts.budget, "argmin");

    // Needs the complete argmin set for the lambda tie-break, so no cap here.
    const auto chunk_fn = [&](std::size_t first) {
        Accum<StairTupleRecord> acc;
        for_each_tail(s, n, first, [&](const std::vector<std::size_t>& idx) {
            std::vector<StaircaseSeq> tuple = pick(ground, idx);
            const ExpectationOracle oracle = oracle_from_staircases(tuple);
            Rat value = en_partition(oracle).value;
            acc.add(StairTupleRecord{std::move(tuple), std::move(value), 0},
                    std::numeric_limits<std::size_t>::max());
        });
        return acc;
    };
    Accum<StairTupleRecord> acc = run_chunked<StairTupleRecord>(
        s, opts.workers, std::numeric_limits<std::size_t>::max(), chunk_fn);

    ArgminReport report;
    report.m = m;
    report.n = n;
    report.tuple_count = acc.evaluated;
    report.min_value = std::move(acc.min_value);
    report.argmin_total = acc.argmin_total;
    bool any_lambda = false;
    for (const StairTupleRecord& rec : acc.argmin) {
        Rat lambda(0);
        for (const StaircaseSeq& a : rec.seqs) lambda += a.expect();
        if (!any_lambda || lambda > report.lambda_max) {
            any_lambda = true;
            report.lambda_max = lambda;
        }
    }
    report.all_constant = true;
    for (StairTupleRecord& rec : acc.argmin) {
        Rat lambda(0);
        for (const StaircaseSeq& a : rec.seqs) lambda += a.expect();
        if (lambda != report.lambda_max) continue;
        ++report.extremal_total;
        for (const StaircaseSeq& a : rec.seqs) {
            if (!a.is_constant()) report.all_constant = false;
        }
        if (report.extremal.size() < opts.report_cap) report.extremal.push_back(std::move(rec));
    }
    report.budget = opts.budget;
    report.report_cap = opts.report_cap;
    report.elapsed_seconds = seconds_since(t0);
    return report;
}

} // namespace fkg
