#include "fkg/json_io.hpp"

#include "fkg/errors.hpp"
#include "fkg/sampling.hpp"

#include <sstream>
#include <utility>

namespace fkg {

namespace {

const Json& require_field(const Json& j, const char* name, const std::string& path) {
    if (!j.is_object()) throw InputError("at " + path + ": expected an object");
    const auto it = j.find(name);
    if (it == j.end()) throw InputError("at " + path + ": missing field '" + name + "'");
    return *it;
}

int require_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw InputError("at " + path + ": expected an integer");
    const auto v = j.get<long long>();
    if (v < -1000000000LL || v > 1000000000LL)
        throw InputError("at " + path + ": integer out of range");
    return static_cast<int>(v);
}

const Json& require_array(const Json& j, const std::string& path) {
    if (!j.is_array()) throw InputError("at " + path + ": expected an array");
    return j;
}

std::string require_string(const Json& j, const std::string& path) {
    if (!j.is_string()) throw InputError("at " + path + ": expected a string");
    return j.get<std::string>();
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

Json stair_record_to_json(const StairTupleRecord& rec, bool with_trial) {
    Json j = Json::object();
    if (with_trial) j["trial"] = rec.trial;
    Json seqs = Json::array();
    for (const StaircaseSeq& a : rec.seqs) seqs.push_back(staircase_to_json(a));
    j["seqs"] = std::move(seqs);
    j["value"] = rat_to_json(rec.value);
    return j;
}

Json rect_record_to_json(const RectTupleRecord& rec) {
    Json j = Json::object();
    j["trial"] = rec.trial;
    Json corners = Json::array();
    for (const auto& corner : rec.corners) {
        Json c = Json::array();
        for (const Rat& x : corner) c.push_back(rat_to_json(x));
        corners.push_back(std::move(c));
    }
    j["corners"] = std::move(corners);
    j["value"] = rat_to_json(rec.value);
    return j;
}

std::string compact(const Json& j) { return j.dump(); }

} // namespace

Json rat_to_json(const Rat& value) { return rat_to_string(value); }

Rat rat_from_json(const Json& j, const std::string& path) {
    const std::string text = require_string(j, path);
    try {
        return rat_from_string(text);
    } catch (const InputError& e) {
        throw InputError("at " + path + ": " + e.what());
    }
}

Json staircase_to_json(const StaircaseSeq& a) {
    Json j = Json::object();
    j["m"] = a.m();
    j["a"] = a.values();
    return j;
}

StaircaseSeq staircase_from_json(const Json& j, const std::string& path) {
    const int m = require_int(require_field(j, "m", path), path + ".m");
    const Json& arr = require_array(require_field(j, "a", path), path + ".a");
    std::vector<int> values;
    values.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
        values.push_back(require_int(arr[i], path + ".a[" + std::to_string(i) + "]"));
    try {
        return StaircaseSeq(m, std::move(values));
    } catch (const InputError& e) {
        throw InputError("at " + path + ": " + e.what());
    }
}

Json indicator_to_json(const GridIndicator& s) {
    Json j = Json::object();
    j["m"] = s.m();
    Json cells = Json::array();
    for (const auto& [i, k] : s.sorted_cells()) cells.push_back(Json::array({i, k}));
    j["cells"] = std::move(cells);
    return j;
}

GridIndicator indicator_from_json(const Json& j, const std::string& path) {
    const int m = require_int(require_field(j, "m", path), path + ".m");
    const Json& arr = require_array(require_field(j, "cells", path), path + ".cells");
    std::vector<std::pair<int, int>> cells;
    cells.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string cell_path = path + ".cells[" + std::to_string(i) + "]";
        const Json& cell = require_array(arr[i], cell_path);
        if (cell.size() != 2) throw InputError("at " + cell_path + ": expected [i, j]");
        cells.emplace_back(require_int(cell[0], cell_path + "[0]"),
                           require_int(cell[1], cell_path + "[1]"));
    }
    try {
        return GridIndicator(m, cells);
    } catch (const InputError& e) {
        throw InputError("at " + path + ": " + e.what());
    }
}

Json grid_function_to_json(const GridFunction& f) {
    Json j = Json::object();
    j["m"] = f.m();
    Json rows = Json::array();
    for (int i = 1; i <= f.m(); ++i) {
        Json row = Json::array();
        for (int k = 1; k <= f.m(); ++k) row.push_back(rat_to_json(f.at(i, k)));
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    j["monotone"] = f.monotone();
    return j;
}

GridFunction grid_function_from_json(const Json& j, const std::string& path) {
    const int m = require_int(require_field(j, "m", path), path + ".m");
    const Json& rows = require_array(require_field(j, "values", path), path + ".values");
    if (static_cast<int>(rows.size()) != m)
        throw InputError("at " + path + ".values: expected " + std::to_string(m) + " rows");
    std::vector<Rat> values;
    values.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string row_path = path + ".values[" + std::to_string(i) + "]";
        const Json& row = require_array(rows[i], row_path);
        if (static_cast<int>(row.size()) != m)
            throw InputError("at " + row_path + ": expected " + std::to_string(m) + " entries");
        for (std::size_t k = 0; k < row.size(); ++k)
            values.push_back(rat_from_json(row[k], row_path + "[" + std::to_string(k) + "]"));
    }
    bool monotone = false;
    if (const auto it = j.find("monotone"); it != j.end()) {
        if (!it->is_boolean())
            throw InputError("at " + path + ".monotone: expected a boolean");
        monotone = it->get<bool>();
    }
    try {
        return GridFunction(m, std::move(values), monotone);
    } catch (const InputError& e) {
        throw InputError("at " + path + ": " + e.what());
    }
}

Json rectangles_to_json(const RectangleFamily& fam) {
    Json j = Json::object();
    j["k"] = fam.k();
    Json rects = Json::array();
    for (const auto& corner : fam.rects()) {
        Json c = Json::array();
        for (const Rat& x : corner) c.push_back(rat_to_json(x));
        rects.push_back(std::move(c));
    }
    j["rects"] = std::move(rects);
    return j;
}

RectangleFamily rectangles_from_json(const Json& j, const std::string& path) {
    const int k = require_int(require_field(j, "k", path), path + ".k");
    const Json& arr = require_array(require_field(j, "rects", path), path + ".rects");
    std::vector<std::vector<Rat>> rects;
    rects.reserve(arr.size());
    for (std::size_t r = 0; r < arr.size(); ++r) {
        const std::string rect_path = path + ".rects[" + std::to_string(r) + "]";
        const Json& rect = require_array(arr[r], rect_path);
        std::vector<Rat> corner;
        corner.reserve(rect.size());
        for (std::size_t c = 0; c < rect.size(); ++c)
            corner.push_back(rat_from_json(rect[c], rect_path + "[" + std::to_string(c) + "]"));
        rects.push_back(std::move(corner));
    }
    try {
        return RectangleFamily(k, std::move(rects));
    } catch (const InputError& e) {
        throw InputError("at " + path + ": " + e.what());
    }
}

Json en_result_to_json(const EnResult& result) {
    Json j = Json::object();
    j["value"] = rat_to_json(result.value);
    j["backend"] = backend_name(result.backend);
    j["terms"] = result.term_count;
    return j;
}

Json scan_report_to_json(const ScanReport& report) {
    Json j = Json::object();
    j["schema"] = kReportSchema;
    j["kind"] = "scan";
    j["scan"] = report.kind;
    j["target"] = report.target;
    if (report.randomized) j["prng"] = kPrngId;
    Json config = Json::object();
    if (report.m > 0) config["m"] = report.m;
    if (report.k > 0) config["k"] = report.k;
    config["n"] = report.n;
    if (report.randomized) config["trials"] = report.trials;
    config["seed"] = report.seed;
    config["budget"] = report.budget;
    config["report_cap"] = report.report_cap;
    j["config"] = std::move(config);
    j["tuples"] = report.tuple_count;
    if (report.kind == "exhaustive") j["ordered_tuples"] = report.ordered_count.get_str();
    j["min_value"] = rat_to_json(report.min_value);
    j["argmin_total"] = report.argmin_total;
    Json argmin = Json::array();
    for (const auto& rec : report.stair_argmin)
        argmin.push_back(stair_record_to_json(rec, report.randomized));
    for (const auto& rec : report.rect_argmin) argmin.push_back(rect_record_to_json(rec));
    j["argmin"] = std::move(argmin);
    j["violation_total"] = report.violation_total;
    Json violations = Json::array();
    for (const auto& rec : report.stair_violations)
        violations.push_back(stair_record_to_json(rec, report.randomized));
    for (const auto& rec : report.rect_violations) violations.push_back(rect_record_to_json(rec));
    j["violations"] = std::move(violations);
    return j;
}

Json prop_report_to_json(const PropCheckReport& report) {
    Json j = Json::object();
    j["schema"] = kReportSchema;
    j["kind"] = "prop-check";
    j["prop"] = prop_name(report.prop);
    if (report.randomized) j["prng"] = kPrngId;
    Json config = Json::object();
    config["m"] = report.m;
    config["n"] = report.n;
    if (report.randomized) config["trials"] = report.trials;
    config["seed"] = report.seed;
    config["budget"] = report.budget;
    config["report_cap"] = report.report_cap;
    j["config"] = std::move(config);
    j["instances"] = report.instances_checked;
    j["failure_total"] = report.failure_total;
    Json failures = Json::array();
    for (const PropFailure& f : report.failures) {
        Json fj = Json::object();
        if (report.randomized) fj["trial"] = f.trial;
        Json seqs = Json::array();
        for (const StaircaseSeq& a : f.seqs) seqs.push_back(staircase_to_json(a));
        fj["seqs"] = std::move(seqs);
        Json cells = Json::array();
        for (const auto& [ci, cj] : f.cells) cells.push_back(Json::array({ci, cj}));
        fj["cells"] = std::move(cells);
        fj["index"] = f.index;
        fj["note"] = f.note;
        failures.push_back(std::move(fj));
    }
    j["failures"] = std::move(failures);
    return j;
}

Json argmin_report_to_json(const ArgminReport& report) {
    Json j = Json::object();
    j["schema"] = kReportSchema;
    j["kind"] = "argmin-structure";
    Json config = Json::object();
    config["m"] = report.m;
    config["n"] = report.n;
    config["seed"] = 0;
    config["budget"] = report.budget;
    config["report_cap"] = report.report_cap;
    j["config"] = std::move(config);
    j["tuples"] = report.tuple_count;
    j["min_value"] = rat_to_json(report.min_value);
    j["argmin_total"] = report.argmin_total;
    j["lambda_max"] = rat_to_json(report.lambda_max);
    j["extremal_total"] = report.extremal_total;
    Json extremal = Json::array();
    for (const auto& rec : report.extremal) extremal.push_back(stair_record_to_json(rec, false));
    j["extremal"] = std::move(extremal);
    j["all_constant"] = report.all_constant;
    return j;
}

std::string scan_report_to_csv(const ScanReport& report) {
    std::ostringstream os;
    os << "row,trial,value,tuple\n";
    const auto stair_row = [&](const char* kind, const StairTupleRecord& rec) {
        Json seqs = Json::array();
        for (const StaircaseSeq& a : rec.seqs) seqs.push_back(staircase_to_json(a));
        os << kind << "," << rec.trial << "," << rat_to_string(rec.value) << ","
           << csv_escape(compact(seqs)) << "\n";
    };
    const auto rect_row = [&](const char* kind, const RectTupleRecord& rec) {
        Json corners = Json::array();
        for (const auto& corner : rec.corners) {
            Json c = Json::array();
            for (const Rat& x : corner) c.push_back(rat_to_json(x));
            corners.push_back(std::move(c));
        }
        os << kind << "," << rec.trial << "," << rat_to_string(rec.value) << ","
           << csv_escape(compact(corners)) << "\n";
    };
    for (const auto& rec : report.stair_argmin) stair_row("argmin", rec);
    for (const auto& rec : report.rect_argmin) rect_row("argmin", rec);
    for (const auto& rec : report.stair_violations) stair_row("violation", rec);
    for (const auto& rec : report.rect_violations) rect_row("violation", rec);
    return os.str();
}

std::string prop_report_to_csv(const PropCheckReport& report) {
    std::ostringstream os;
    os << "row,trial,index,note,instance\n";
    for (const PropFailure& f : report.failures) {
        Json instance = Json::object();
        Json seqs = Json::array();
        for (const StaircaseSeq& a : f.seqs) seqs.push_back(staircase_to_json(a));
        instance["seqs"] = std::move(seqs);
        Json cells = Json::array();
        for (const auto& [ci, cj] : f.cells) cells.push_back(Json::array({ci, cj}));
        instance["cells"] = std::move(cells);
        os << "failure," << f.trial << "," << f.index << "," << csv_escape(f.note) << ","
           << csv_escape(compact(instance)) << "\n";
    }
    return os.str();
}

std::string argmin_report_to_csv(const ArgminReport& report) {
    std::ostringstream os;
    os << "row,value,tuple\n";
    for (const auto& rec : report.extremal) {
        Json seqs = Json::array();
        for (const StaircaseSeq& a : rec.seqs) seqs.push_back(staircase_to_json(a));
        os << "extremal," << rat_to_string(rec.value) << "," << csv_escape(compact(seqs)) << "\n";
    }
    return os.str();
}

ComputeInput compute_input_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("at $: expected an object");
    ComputeInput input;
    int kinds = 0;
    if (const auto it = j.find("staircases"); it != j.end()) {
        ++kinds;
        const Json& arr = require_array(*it, "$.staircases");
        if (arr.empty()) throw InputError("at $.staircases: empty list");
        for (std::size_t i = 0; i < arr.size(); ++i)
            input.staircases.push_back(
                staircase_from_json(arr[i], "$.staircases[" + std::to_string(i) + "]"));
    }
    if (const auto it = j.find("gridfunctions"); it != j.end()) {
        ++kinds;
        const Json& arr = require_array(*it, "$.gridfunctions");
        if (arr.empty()) throw InputError("at $.gridfunctions: empty list");
        for (std::size_t i = 0; i < arr.size(); ++i)
            input.grid_functions.push_back(
                grid_function_from_json(arr[i], "$.gridfunctions[" + std::to_string(i) + "]"));
    }
    if (const auto it = j.find("rectangles"); it != j.end()) {
        ++kinds;
        input.rectangle_families.push_back(rectangles_from_json(*it, "$.rectangles"));
        if (input.rectangle_families.front().size() == 0)
            throw InputError("at $.rectangles.rects: empty list");
    }
    if (kinds == 0)
        throw InputError("at $: expected one of 'staircases', 'gridfunctions', 'rectangles'");
    if (kinds > 1) throw InputError("at $: input must contain exactly one function family kind");
    return input;
}

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("json parse error: ") + e.what());
    }
}

} // namespace fkg
