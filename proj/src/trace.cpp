#include "spinres/trace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinres/errors.hpp"

namespace spinres {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Floquet: return "floquet";
        case Method::Bw1: return "bw1";
        case Method::Bw2: return "bw2";
        case Method::Ode: return "ode";
    }
    return "unknown";
}

Method parse_method(std::string_view text) {
    if (text == "floquet") return Method::Floquet;
    if (text == "bw1") return Method::Bw1;
    if (text == "bw2") return Method::Bw2;
    if (text == "ode") return Method::Ode;
    throw ConfigError("unknown method '" + std::string(text) + "'");
}

double ProbabilityTrace::max_probability() const {
    if (probabilities.empty()) return 0.0;
    return *std::max_element(probabilities.begin(), probabilities.end());
}

double clamp_probability(double p) {
    if (!std::isfinite(p) || p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack) {
        throw NumericalError("transition probability out of range: " + std::to_string(p));
    }
    return std::clamp(p, 0.0, 1.0);
}

void check_time_grid(std::span<const double> t_grid) {
    if (t_grid.empty()) throw ConfigError("time grid is empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!std::isfinite(t_grid[i])) throw ConfigError("time grid contains a non-finite value");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
            throw ConfigError("time grid must be strictly increasing");
        }
    }
}

double max_deviation(const ProbabilityTrace& a, const ProbabilityTrace& b) {
    if (a.size() != b.size()) throw ConfigError("traces have different lengths");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a.probabilities[i] - b.probabilities[i]));
    }
    return worst;
}

}  // namespace spinres
