#pragma once

#include "fkg/engine.hpp"
#include "fkg/lattice.hpp"
#include "fkg/rational.hpp"
#include "fkg/verify.hpp"

// Single include point for the vendored header; everything uses ordered
// maps so emitted documents are reproducible byte for byte.
#include <json.hpp>

#include <string>
#include <vector>

namespace fkg {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "fkg-lab/report-v1";

// Rationals cross the wire as "p/q" in lowest terms, q > 0, always with the
// explicit denominator.
Json rat_to_json(const Rat& value);
Rat rat_from_json(const Json& j, const std::string& path);

Json staircase_to_json(const StaircaseSeq& a);
StaircaseSeq staircase_from_json(const Json& j, const std::string& path);

Json indicator_to_json(const GridIndicator& s);
GridIndicator indicator_from_json(const Json& j, const std::string& path);

Json grid_function_to_json(const GridFunction& f);
GridFunction grid_function_from_json(const Json& j, const std::string& path);

Json rectangles_to_json(const RectangleFamily& fam);
RectangleFamily rectangles_from_json(const Json& j, const std::string& path);

Json en_result_to_json(const EnResult& result);

Json scan_report_to_json(const ScanReport& report);
Json prop_report_to_json(const PropCheckReport& report);
Json argmin_report_to_json(const ArgminReport& report);

// Flat convenience export: one row per listed argmin/violation/failure.
std::string scan_report_to_csv(const ScanReport& report);
std::string prop_report_to_csv(const PropCheckReport& report);
std::string argmin_report_to_csv(const ArgminReport& report);

// Wrapper for cli/test input files. Exactly one of the three lists is set.
struct ComputeInput {
    std::vector<StaircaseSeq> staircases;
    std::vector<GridFunction> grid_functions;
    std::vector<RectangleFamily> rectangle_families;  // zero or one entry
};

ComputeInput compute_input_from_json(const Json& j);
Json parse_json_text(const std::string& text);

} // namespace fkg
