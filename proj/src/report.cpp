#include "spinres/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace spinres {

namespace {

nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trace_csv(const ProbabilityTrace& trace) {
    std::ostringstream os;
    os << "t,probability\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        os << format_double(trace.times[i]) << ',' << format_double(trace.probabilities[i]) << '\n';
    }
    return os.str();
}

nlohmann::json trace_json(const ProbabilityTrace& trace, const nlohmann::json& config) {
    return {
        {"command", "simulate"},
        {"config", config},
        {"method", to_string(trace.method)},
        {"t", trace.times},
        {"probability", trace.probabilities},
    };
}

std::string scan_csv(const ScanResult& result) {
    std::ostringstream os;
    os << "omega," << to_string(result.response) << '\n';
    for (std::size_t i = 0; i < result.omega_values.size(); ++i) {
        os << format_double(result.omega_values[i]) << ',' << format_double(result.response_values[i]) << '\n';
    }
    return os.str();
}

nlohmann::json scan_json(const ScanResult& result, const nlohmann::json& config) {
    nlohmann::json doc = {
        {"command", "scan"},
        {"config", config},
        {"method", to_string(result.method)},
        {"response", to_string(result.response)},
        {"omega", result.omega_values},
        {"values", result.response_values},
        {"has_peak", result.has_peak()},
        {"located_resonance", result.located_resonance ? nlohmann::json(*result.located_resonance) : nullptr},
        {"shift", number_or_null(result.shift)},
    };
    if (!result.n_max_used.empty()) doc["n_max"] = result.n_max_used;
    return doc;
}

std::string shift_csv(const ShiftReport& report) {
    std::ostringstream os;
    os << "numeric_shift,formula_exact,formula_approx,relative_discrepancy\n"
       << format_double(report.numeric_shift) << ',' << format_double(report.formula_exact) << ','
       << format_double(report.formula_approx) << ',' << format_double(report.relative_discrepancy) << '\n';
    return os.str();
}

nlohmann::json shift_json(const ShiftReport& report, const nlohmann::json& config) {
    nlohmann::json scan = scan_json(report.scan, config);
    scan.erase("command");
    scan.erase("config");
    return {
        {"command", "shift"},
        {"config", config},
        {"numeric_shift", report.numeric_shift},
        {"formula_exact", report.formula_exact},
        {"formula_approx", report.formula_approx},
        {"relative_discrepancy", number_or_null(report.relative_discrepancy)},
        {"scan", scan},
    };
}

std::string comparison_csv(const MethodComparison& cmp) {
    std::ostringstream os;
    os << "method_a,method_b,max_deviation\n";
    for (std::size_t i = 0; i < cmp.methods.size(); ++i) {
        for (std::size_t j = i + 1; j < cmp.methods.size(); ++j) {
            os << to_string(cmp.methods[i]) << ',' << to_string(cmp.methods[j]) << ','
               << format_double(cmp.max_deviation(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
               << '\n';
        }
    }
    return os.str();
}

nlohmann::json comparison_json(const MethodComparison& cmp, const nlohmann::json& config) {
    nlohmann::json names = nlohmann::json::array();
    for (Method m : cmp.methods) names.push_back(to_string(m));
    nlohmann::json matrix = nlohmann::json::array();
    for (Eigen::Index i = 0; i < 4; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < 4; ++j) row.push_back(cmp.max_deviation(i, j));
        matrix.push_back(row);
    }
    return {
        {"command", "compare"},
        {"config", config},
        {"methods", names},
        {"max_deviation", matrix},
    };
}

}  // namespace spinres
