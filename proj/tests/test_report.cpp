#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spinres/report.hpp"

using namespace spinres;

namespace {

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("doubles round-trip through their text form") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1e3, 1e3);
    for (int k = 0; k < 1000; ++k) {
        const double x = dist(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("trace CSV and JSON") {
    ProbabilityTrace trace;
    trace.times = {0.0, 0.1, 0.2};
    trace.probabilities = {0.0, 1.0 / 3.0, 0.25};
    trace.method = Method::Ode;
    const auto rows = lines(trace_csv(trace));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "t,probability");
    CHECK(rows[2] == "0.10000000000000001,0.33333333333333331");

    const auto doc = trace_json(trace, {{"mode", "h1"}});
    CHECK(doc["command"] == "simulate");
    CHECK(doc["method"] == "ode");
    CHECK(doc["config"]["mode"] == "h1");
    CHECK(doc["probability"].size() == 3);
    CHECK(doc["t"][1].get<double>() == 0.1);
}

TEST_CASE("scan and shift output") {
    ScanResult result;
    result.omega_values = {0.9, 1.0, 1.1};
    result.response_values = {0.2, 1.0, 0.2};
    result.response = Response::PeakAmplitude;
    result.method = Method::Bw1;
    result.located_resonance = 1.0;
    result.shift = 0.0;
    const auto rows = lines(scan_csv(result));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "omega,amplitude");
    CHECK(rows[2] == "1,1");
    const auto doc = scan_json(result, nlohmann::json::object());
    CHECK(doc["has_peak"] == true);
    CHECK(doc["located_resonance"].get<double>() == 1.0);
    CHECK_FALSE(doc.contains("n_max"));

    result.located_resonance.reset();
    result.shift = std::nan("");
    const auto flat = scan_json(result, nlohmann::json::object());
    CHECK(flat["has_peak"] == false);
    CHECK(flat["located_resonance"].is_null());
    CHECK(flat["shift"].is_null());

    ShiftReport report;
    report.numeric_shift = 0.0025;
    report.formula_exact = 1.0025;
    report.formula_approx = 1.0025;
    report.relative_discrepancy = 0.0;
    report.scan = result;
    const auto shift_rows = lines(shift_csv(report));
    REQUIRE(shift_rows.size() == 2);
    CHECK(shift_rows[0] == "numeric_shift,formula_exact,formula_approx,relative_discrepancy");
    const auto shift_doc = shift_json(report, {{"b", 0.05}});
    CHECK(shift_doc["command"] == "shift");
    CHECK(shift_doc["scan"].contains("values"));
    CHECK_FALSE(shift_doc["scan"].contains("config"));
}

TEST_CASE("comparison output lists each pair once") {
    MethodComparison cmp;
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) cmp.max_deviation(i, j) = i == j ? 0.0 : 0.1 * static_cast<double>(i + j);
    const auto rows = lines(comparison_csv(cmp));
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == "method_a,method_b,max_deviation");
    CHECK(rows[1] == "ode,floquet,0.10000000000000001");
    CHECK(rows[6] == "bw1,bw2,0.5");
    const auto doc = comparison_json(cmp, nlohmann::json::object());
    CHECK(doc["methods"] == nlohmann::json({"ode", "floquet", "bw1", "bw2"}));
    CHECK(doc["max_deviation"][2][3].get<double>() == 0.5);
    CHECK(cmp.deviation(Method::Bw1, Method::Bw2) == 0.5);
}
