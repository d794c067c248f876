#include "fkg/engine.hpp"
#include "fkg/errors.hpp"
#include "fkg/json_io.hpp"
#include "fkg/lattice.hpp"
#include "fkg/oracle.hpp"
#include "fkg/rational.hpp"
#include "fkg/sampling.hpp"
#include "fkg/series.hpp"
#include "fkg/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using fkg::Json;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

struct GlobalOpts {
    std::string output;
    std::string format = "json";
    std::uint64_t seed = 0;
    int workers = 1;
    std::uint64_t budget = fkg::kDefaultBudget;
};

void emit(const GlobalOpts& opts, const std::string& text) {
    if (opts.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.output, std::ios::binary);
    if (!out) throw fkg::InputError("cannot open output file '" + opts.output + "'");
    out << text;
}

void emit_json(const GlobalOpts& opts, const Json& j) { emit(opts, j.dump(2) + "\n"); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fkg::InputError("cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void note_elapsed(double seconds) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    os << "elapsed: " << seconds << "s\n";
    std::cerr << os.str();
}

fkg::ScanOptions scan_options(const GlobalOpts& g) {
    fkg::ScanOptions opts;
    opts.budget = g.budget;
    opts.workers = g.workers;
    return opts;
}

Json base_config(const GlobalOpts& g, const std::string& command) {
    Json config = Json::object();
    config["command"] = command;
    config["seed"] = g.seed;
    config["budget"] = g.budget;
    config["format"] = g.format;
    return config;
}

int run_compute(const GlobalOpts& g, const std::string& input_path,
                const std::string& backend_name, int arity_assert) {
    const fkg::Backend backend = fkg::backend_from_name(backend_name);
    const fkg::ComputeInput input =
        fkg::compute_input_from_json(fkg::parse_json_text(read_file(input_path)));

    const auto t0 = std::chrono::steady_clock::now();
    fkg::ExpectationOracle oracle = [&] {
        if (!input.staircases.empty()) return fkg::oracle_from_staircases(input.staircases);
        if (!input.grid_functions.empty())
            return fkg::oracle_from_grid_functions(input.grid_functions);
        return fkg::oracle_from_rectangles(input.rectangle_families.front());
    }();
    if (arity_assert > 0 && arity_assert != oracle.arity()) {
        throw fkg::InputError("expected " + std::to_string(arity_assert) + " functions, got " +
                              std::to_string(oracle.arity()));
    }
    const fkg::EnResult result = fkg::en_by_backend(oracle, backend);
    note_elapsed(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    if (g.format == "csv") {
        emit(g, "value,backend,terms\n" + fkg::rat_to_string(result.value) + "," +
                    fkg::backend_name(result.backend) + "," +
                    std::to_string(result.term_count) + "\n");
        return kExitOk;
    }
    Json j = Json::object();
    j["schema"] = fkg::kReportSchema;
    j["kind"] = "compute";
    Json config = base_config(g, "compute");
    config["backend"] = fkg::backend_name(backend);
    config["n"] = oracle.arity();
    j["config"] = std::move(config);
    j["value"] = fkg::rat_to_json(result.value);
    j["backend"] = fkg::backend_name(result.backend);
    j["terms"] = result.term_count;
    emit_json(g, j);
    return kExitOk;
}

int run_verify(const GlobalOpts& g, const std::string& prop_str, bool all, int m, int n,
               std::uint64_t trials) {
    fkg::PropOptions opts;
    opts.budget = g.budget;
    opts.workers = g.workers;
    opts.trials = trials;
    opts.seed = g.seed;

    if (!all) {
        const fkg::PropId prop = fkg::prop_from_name(prop_str);
        const fkg::PropCheckReport report = fkg::check_proposition(prop, m, n, opts);
        note_elapsed(report.elapsed_seconds);
        if (g.format == "csv") {
            emit(g, fkg::prop_report_to_csv(report));
        } else {
            emit_json(g, fkg::prop_report_to_json(report));
        }
        return report.failure_total == 0 ? kExitOk : kExitPropertyFailure;
    }

    Json reports = Json::array();
    std::uint64_t failure_total = 0;
    double elapsed = 0;
    for (const fkg::PropId prop : fkg::all_props()) {
        try {
            const fkg::PropCheckReport report = fkg::check_proposition(prop, m, n, opts);
            failure_total += report.failure_total;
            elapsed += report.elapsed_seconds;
            reports.push_back(fkg::prop_report_to_json(report));
        } catch (const fkg::BudgetError& e) {
            Json skipped = Json::object();
            skipped["prop"] = fkg::prop_name(prop);
            skipped["skipped"] = e.what();
            reports.push_back(std::move(skipped));
        }
    }
    note_elapsed(elapsed);
    Json j = Json::object();
    j["schema"] = fkg::kReportSchema;
    j["kind"] = "verify-suite";
    Json config = base_config(g, "verify");
    config["m"] = m;
    config["n"] = n;
    config["trials"] = trials;
    j["config"] = std::move(config);
    j["failure_total"] = failure_total;
    j["reports"] = std::move(reports);
    emit_json(g, j);
    return failure_total == 0 ? kExitOk : kExitPropertyFailure;
}

int finish_scan(const GlobalOpts& g, const fkg::ScanReport& report, bool violations_are_bugs) {
    note_elapsed(report.elapsed_seconds);
    if (g.format == "csv") {
        emit(g, fkg::scan_report_to_csv(report));
    } else {
        emit_json(g, fkg::scan_report_to_json(report));
    }
    if (violations_are_bugs && report.violation_total > 0) return kExitPropertyFailure;
    return kExitOk;
}

int run_series_gmean(const GlobalOpts& g, const std::string& input_path, int degree) {
    const fkg::ComputeInput input =
        fkg::compute_input_from_json(fkg::parse_json_text(read_file(input_path)));
    if (!input.rectangle_families.empty())
        throw fkg::InputError("series needs grid inputs, not rectangles");
    std::vector<fkg::GridFunction> fs;
    for (const fkg::StaircaseSeq& a : input.staircases)
        fs.push_back(fkg::GridFunction::from_staircase(a));
    for (const fkg::GridFunction& f : input.grid_functions) fs.push_back(f);

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<fkg::Rat> coeffs = fkg::geometric_mean_coeffs(fs, degree);
    note_elapsed(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    if (g.format == "csv") {
        std::ostringstream os;
        os << "degree,coeff\n";
        for (std::size_t d = 0; d < coeffs.size(); ++d)
            os << d + 1 << "," << fkg::rat_to_string(coeffs[d]) << "\n";
        emit(g, os.str());
        return kExitOk;
    }
    Json j = Json::object();
    j["schema"] = fkg::kReportSchema;
    j["kind"] = "series";
    j["op"] = "gmean";
    Json config = base_config(g, "series gmean");
    config["degree"] = degree;
    config["functions"] = fs.size();
    j["config"] = std::move(config);
    j["degree"] = degree;
    Json cj = Json::array();
    for (const fkg::Rat& c : coeffs) cj.push_back(fkg::rat_to_json(c));
    j["coeffs"] = std::move(cj);
    emit_json(g, j);
    return kExitOk;
}

int run_series_equiv(const GlobalOpts& g, const std::string& input_path, int arity_assert,
                     bool allow_large) {
    const fkg::ComputeInput input =
        fkg::compute_input_from_json(fkg::parse_json_text(read_file(input_path)));
    if (!input.rectangle_families.empty())
        throw fkg::InputError("series needs grid inputs, not rectangles");
    std::vector<fkg::GridFunction> fs;
    for (const fkg::StaircaseSeq& a : input.staircases)
        fs.push_back(fkg::GridFunction::from_staircase(a));
    for (const fkg::GridFunction& f : input.grid_functions) fs.push_back(f);
    if (arity_assert > 0 && arity_assert != static_cast<int>(fs.size())) {
        throw fkg::InputError("expected " + std::to_string(arity_assert) + " functions, got " +
                              std::to_string(fs.size()));
    }

    const auto t0 = std::chrono::steady_clock::now();
    const fkg::PrimesEncoding enc = fkg::primes_encoding(static_cast<int>(fs.size()));
    const fkg::Rat via_series = fkg::extract_en_via_series(fs, allow_large);
    const fkg::Rat reference = fkg::en_partition(fkg::oracle_from_grid_functions(fs)).value;
    note_elapsed(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    if (via_series != reference) {
        throw fkg::EngineBug("series coefficient " + fkg::rat_to_string(via_series) +
                             " disagrees with the cycle sum " + fkg::rat_to_string(reference));
    }

    Json j = Json::object();
    j["schema"] = fkg::kReportSchema;
    j["kind"] = "series";
    j["op"] = "equiv";
    Json config = base_config(g, "series equiv");
    config["n"] = fs.size();
    config["allow_large"] = allow_large;
    j["config"] = std::move(config);
    Json kj = Json::array();
    for (long long k : enc.k) kj.push_back(k);
    j["exponents"] = std::move(kj);
    j["degree"] = enc.target;
    j["value"] = fkg::rat_to_json(via_series);
    j["reference"] = fkg::rat_to_json(reference);
    if (g.format == "csv") {
        emit(g, "degree,value,reference\n" + std::to_string(enc.target) + "," +
                    fkg::rat_to_string(via_series) + "," + fkg::rat_to_string(reference) + "\n");
        return kExitOk;
    }
    emit_json(g, j);
    return kExitOk;
}

int run_bench_backends(const GlobalOpts& g, bool format_given, int m, int n_min, int n_max,
                       const std::string& which) {
    if (n_min < 2 || n_max < n_min) throw fkg::InputError("bench: need 2 <= n-min <= n-max");
    if (which != "all") fkg::backend_from_name(which);  // validates the name

    struct Row {
        int n;
        std::string backend;
        std::uint64_t terms;
        double seconds;
        fkg::Rat value;
    };
    std::vector<Row> rows;
    for (int n = n_min; n <= n_max; ++n) {
        fkg::Rng rng = fkg::Rng::for_stream(g.seed, static_cast<std::uint64_t>(n));
        std::vector<fkg::StaircaseSeq> tuple;
        tuple.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) tuple.push_back(fkg::sample_staircase(rng, m));
        const fkg::ExpectationOracle oracle = fkg::oracle_from_staircases(tuple);
        for (const fkg::Backend backend :
             {fkg::Backend::naive, fkg::Backend::partition, fkg::Backend::recursive}) {
            if (which != "all" && fkg::backend_name(backend) != which) continue;
            if (backend == fkg::Backend::naive && n > fkg::kNaiveCap) continue;
            if (backend == fkg::Backend::partition && n > fkg::kPartitionCap) continue;
            const auto t0 = std::chrono::steady_clock::now();
            const fkg::EnResult result = fkg::en_by_backend(oracle, backend);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            rows.push_back(
                {n, fkg::backend_name(backend), result.term_count, secs, result.value});
        }
    }

    const bool csv = g.format == "csv" || !format_given;
    if (csv) {
        std::ostringstream os;
        os << "n,backend,terms,seconds,value\n";
        os.setf(std::ios::fixed);
        os.precision(6);
        for (const Row& r : rows)
            os << r.n << "," << r.backend << "," << r.terms << "," << r.seconds << ","
               << fkg::rat_to_string(r.value) << "\n";
        emit(g, os.str());
        return kExitOk;
    }
    Json j = Json::object();
    j["schema"] = fkg::kReportSchema;
    j["kind"] = "bench";
    j["op"] = "backends";
    Json config = base_config(g, "bench backends");
    config["m"] = m;
    config["n_min"] = n_min;
    config["n_max"] = n_max;
    j["config"] = std::move(config);
    Json rj = Json::array();
    for (const Row& r : rows) {
        Json row = Json::object();
        row["n"] = r.n;
        row["backend"] = r.backend;
        row["terms"] = r.terms;
        row["seconds"] = r.seconds;
        row["value"] = fkg::rat_to_json(r.value);
        rj.push_back(std::move(row));
    }
    j["rows"] = std::move(rj);
    emit_json(g, j);
    return kExitOk;
}

int run_bench_oracle(const GlobalOpts& g, bool format_given, int m, int n) {
    if (n < 1) throw fkg::InputError("bench: n must be at least 1");
    fkg::Rng rng = fkg::Rng::for_stream(g.seed, 1);
    std::vector<fkg::StaircaseSeq> tuple;
    tuple.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) tuple.push_back(fkg::sample_staircase(rng, m));
    const auto t0 = std::chrono::steady_clock::now();
    const fkg::ExpectationOracle oracle = fkg::oracle_from_staircases(tuple);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::uint64_t moments = (std::uint64_t{1} << n) - 1;
    (void)oracle;

    const bool csv = g.format == "csv" || !format_given;
    if (csv) {
        std::ostringstream os;
        os.setf(std::ios::fixed);
        os.precision(6);
        os << "m,n,moments,seconds\n"
           << m << "," << n << "," << moments << "," << secs << "\n";
        emit(g, os.str());
        return kExitOk;
    }
    Json j = Json::object();
    j["schema"] = fkg::kReportSchema;
    j["kind"] = "bench";
    j["op"] = "oracle";
    Json config = base_config(g, "bench oracle");
    config["m"] = m;
    config["n"] = n;
    j["config"] = std::move(config);
    j["moments"] = moments;
    j["seconds"] = secs;
    emit_json(g, j);
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Exact functionals and verification harness for monotone grid families"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--output", g.output, "Write the report to a file instead of stdout");
    app.add_option("--format", g.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", g.seed, "PRNG seed for randomized commands");
    app.add_option("--workers", g.workers, "Worker threads for scans")
        ->check(CLI::Range(1, 256));
    app.add_option("--budget", g.budget, "Maximum enumerated instances before refusal");

    // compute
    std::string compute_input;
    std::string compute_backend = "partition";
    int compute_arity = 0;
    auto* compute = app.add_subcommand("compute", "Evaluate the functional on a family file");
    compute->add_option("input", compute_input, "JSON input file")->required();
    compute->add_option("--backend", compute_backend, "naive, partition, or recursive");
    compute->add_option("--n", compute_arity, "Assert the family arity");

    // verify
    std::string verify_prop;
    bool verify_all = false;
    int verify_m = 2;
    int verify_n = 3;
    std::uint64_t verify_trials = 200;
    auto* verify = app.add_subcommand("verify", "Check an identity or inequality exhaustively");
    verify->add_option("--prop", verify_prop,
                       "averaging, star, meet-star, apmb, A_n, B_n, or branching");
    verify->add_flag("--all", verify_all, "Run every check at the given sizes");
    verify->add_option("--m", verify_m, "Grid resolution");
    verify->add_option("--n", verify_n, "Family arity");
    verify->add_option("--trials", verify_trials, "Random instances for randomized checks");

    // search
    auto* search = app.add_subcommand("search", "Scan for minima and violations");
    search->require_subcommand(1);
    int sx_m = 2, sx_n = 3;
    std::string sx_target = "en";
    auto* sx = search->add_subcommand("exhaustive", "Every sorted tuple over the lattice");
    sx->add_option("--m", sx_m, "Grid resolution")->required();
    sx->add_option("--n", sx_n, "Family arity")->required();
    sx->add_option("--target", sx_target, "en or kappa3");
    int sr_m = 2, sr_n = 3;
    std::uint64_t sr_trials = 1000;
    auto* sr = search->add_subcommand("random", "Uniform random tuples");
    sr->add_option("--m", sr_m, "Grid resolution")->required();
    sr->add_option("--n", sr_n, "Family arity")->required();
    sr->add_option("--trials", sr_trials, "Number of sampled tuples");
    int rc_k = 2, rc_n = 3;
    std::uint64_t rc_trials = 100;
    auto* rc = search->add_subcommand("rectangles", "Random rational down-rectangles");
    rc->add_option("--k", rc_k, "Ambient dimension")->required();
    rc->add_option("--n", rc_n, "Family arity")->required();
    rc->add_option("--trials", rc_trials, "Number of sampled families");
    int kp_m = 2;
    auto* kp = search->add_subcommand("kappa3", "Exhaustive third-cumulant scan (n=3)");
    kp->add_option("--m", kp_m, "Grid resolution");
    int am_m = 2, am_n = 3;
    auto* am = search->add_subcommand("argmin", "Minimizers and the constant-tuple check");
    am->add_option("--m", am_m, "Grid resolution")->required();
    am->add_option("--n", am_n, "Family arity")->required();

    // series
    auto* series = app.add_subcommand("series", "Power-series identities");
    series->require_subcommand(1);
    std::string gm_input;
    int gm_degree = 6;
    auto* gm = series->add_subcommand("gmean", "Geometric-mean coefficients c_1..c_D");
    gm->add_option("input", gm_input, "JSON input file")->required();
    gm->add_option("--degree", gm_degree, "Truncation degree")->check(CLI::Range(1, 64));
    std::string eq_input;
    int eq_arity = 0;
    bool eq_allow_large = false;
    auto* eq = series->add_subcommand("equiv", "Recover the functional from one coefficient");
    eq->add_option("input", eq_input, "JSON input file")->required();
    eq->add_option("--n", eq_arity, "Assert the family arity");
    eq->add_flag("--allow-large", eq_allow_large, "Permit the degree-247 run at n=4");

    // bench
    auto* bench = app.add_subcommand("bench", "Timing tables");
    bench->require_subcommand(1);
    int bb_m = 4, bb_nmin = 6, bb_nmax = 9;
    std::string bb_backend = "all";
    auto* bb = bench->add_subcommand("backends", "Time each backend on random families");
    bb->add_option("--m", bb_m, "Grid resolution");
    bb->add_option("--n-min", bb_nmin, "Smallest arity");
    bb->add_option("--n-max", bb_nmax, "Largest arity");
    bb->add_option("--backend", bb_backend, "Restrict to one backend");
    int bo_m = 50, bo_n = 10;
    auto* bo = bench->add_subcommand("oracle", "Time the moment-table build");
    bo->add_option("--m", bo_m, "Grid resolution");
    bo->add_option("--n", bo_n, "Family arity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    const auto* format_opt = app.get_option("--format");
    const bool format_given = format_opt->count() > 0;

    if (compute->parsed()) return run_compute(g, compute_input, compute_backend, compute_arity);
    if (verify->parsed()) {
        if (verify_all == !verify_prop.empty())
            throw fkg::InputError("verify needs exactly one of --prop or --all");
        return run_verify(g, verify_prop, verify_all, verify_m, verify_n, verify_trials);
    }
    if (sx->parsed()) {
        const fkg::ScanReport report = fkg::exhaustive_scan(
            sx_m, sx_n, fkg::scan_target_from_name(sx_target), scan_options(g));
        return finish_scan(g, report, sx_target == "en");
    }
    if (sr->parsed()) {
        const fkg::ScanReport report = fkg::random_scan(sr_m, sr_n, sr_trials, g.seed,
                                                        scan_options(g));
        return finish_scan(g, report, true);
    }
    if (rc->parsed()) {
        const fkg::ScanReport report = fkg::rectangle_scan(rc_k, rc_n, rc_trials, g.seed,
                                                           scan_options(g));
        return finish_scan(g, report, true);
    }
    if (kp->parsed()) {
        const fkg::ScanReport report =
            fkg::exhaustive_scan(kp_m, 3, fkg::ScanTarget::kappa3, scan_options(g));
        return finish_scan(g, report, false);
    }
    if (am->parsed()) {
        const fkg::ArgminReport report = fkg::argmin_structure(am_m, am_n, scan_options(g));
        note_elapsed(report.elapsed_seconds);
        if (g.format == "csv") {
            emit(g, fkg::argmin_report_to_csv(report));
        } else {
            emit_json(g, fkg::argmin_report_to_json(report));
        }
        return report.all_constant ? kExitOk : kExitPropertyFailure;
    }
    if (gm->parsed()) return run_series_gmean(g, gm_input, gm_degree);
    if (eq->parsed()) return run_series_equiv(g, eq_input, eq_arity, eq_allow_large);
    if (bb->parsed())
        return run_bench_backends(g, format_given, bb_m, bb_nmin, bb_nmax, bb_backend);
    if (bo->parsed()) return run_bench_oracle(g, format_given, bo_m, bo_n);
    throw fkg::InputError("no subcommand given");
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const fkg::BudgetError& e) {
        std::cerr << "budget refusal: " << e.what() << "\n";
        return kExitBudget;
    } catch (const fkg::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fkg::EngineBug& e) {
        std::cerr << "engine bug: " << e.what() << "\n";
        return kExitPropertyFailure;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitPropertyFailure;
    }
}
