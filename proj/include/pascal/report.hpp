#pragma once

#include <optional>
#include <string>

#include "pascal/compensator.hpp"
#include "pascal/enumerate.hpp"
#include "pascal/taint.hpp"

namespace pascal {

// Everything one pipeline run learned about a design; serialized to JSON
// (schema 1) plus a per-class discovery-time CSV.
struct ReportDocument {
    std::string design_name;
    std::string input_file;
    std::string content_sha256;
    int t_bound = 0;

    std::string taint_verdict;  // "NO_PATH" | "PATH_EXISTS"
    std::vector<std::string> tainted_signals;
    std::map<std::string, std::set<std::string>> witness_cones;

    std::optional<TimingClassReport> classes;
    std::optional<NoninterferenceResult> noninterference;
    std::optional<CompensatorSpec> compensator;
    std::optional<OverheadReport> overhead;
    std::string sduv_file;  // harden runs only
};

std::string report_to_json(const ReportDocument &doc);

// CSV: class_index,latency_cycles,discovery_wall_ms,discovery_normalized
// (normalized by the summed per-class discovery time).
std::string classes_to_csv(const TimingClassReport &report);

// Reads back the compensator parameters from a serialized report, enough to
// re-run verification without re-enumerating.
CompensatorSpec compensator_from_report_json(const std::string &json_text);

} // namespace pascal
