#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "spinres/drives.hpp"

namespace spinres {

enum class Method { Floquet, Bw1, Bw2, Ode };

std::string_view to_string(Method m);
Method parse_method(std::string_view text);

// Probabilities may stray this far outside [0, 1] from round-off before it
// counts as a numerical failure; anything within is clamped.
inline constexpr double kProbabilitySlack = 1e-9;

/// Sampled P_{alpha->beta}(t; t0), tagged with the method that produced it.
struct ProbabilityTrace {
    std::vector<double> times;
    std::vector<double> probabilities;
    Method method = Method::Floquet;
    SpinParams params;
    DriveMode mode = DriveMode::Custom;

    std::size_t size() const { return times.size(); }
    double max_probability() const;
};

/// Clamps p into [0, 1]; throws NumericalError when p is not finite or lies
/// more than kProbabilitySlack outside.
double clamp_probability(double p);

/// Throws ConfigError unless the grid is non-empty, finite and strictly increasing.
void check_time_grid(std::span<const double> t_grid);

/// Largest |a_i - b_i| over two traces sampled on the same grid.
double max_deviation(const ProbabilityTrace& a, const ProbabilityTrace& b);

}  // namespace spinres
