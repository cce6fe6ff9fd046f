#pragma once

#include <string>

#include <json.hpp>

#include "spinres/scan.hpp"
#include "spinres/trace.hpp"

namespace spinres {

// CSV and JSON renderings used by the command-line tool. CSV has a header
// row and one record per grid/time point; doubles use 17 significant digits
// so they round-trip exactly. JSON documents echo `config` alongside the data.

std::string format_double(double x);

std::string trace_csv(const ProbabilityTrace& trace);
nlohmann::json trace_json(const ProbabilityTrace& trace, const nlohmann::json& config);

std::string scan_csv(const ScanResult& result);
nlohmann::json scan_json(const ScanResult& result, const nlohmann::json& config);

std::string shift_csv(const ShiftReport& report);
nlohmann::json shift_json(const ShiftReport& report, const nlohmann::json& config);

// One record per unordered method pair.
std::string comparison_csv(const MethodComparison& cmp);
nlohmann::json comparison_json(const MethodComparison& cmp, const nlohmann::json& config);

}  // namespace spinres
