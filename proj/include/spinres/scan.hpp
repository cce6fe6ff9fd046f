#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinres/bw.hpp"
#include "spinres/drives.hpp"
#include "spinres/floquet.hpp"
#include "spinres/oracle.hpp"
#include "spinres/trace.hpp"

namespace spinres {

enum class Response {
    PeakAmplitude,  ///< peak transition probability
    MinGap,         ///< quasi-energy gap of the resonant pair (floquet only)
};

std::string_view to_string(Response r);
Response parse_response(std::string_view text);  // "amplitude" | "gap"

// Below this peak amplitude (or pair mixing, for the gap response) a sweep
// reports that there is no resonance.
inline constexpr double kNoPeakThreshold = 1e-3;

// Smallest truncation tolerance requested from auto_truncate; roughly the
// round-off level of the quasi-energies.
inline constexpr double kTruncationTolFloor = 5e-14;

/// Knobs shared by every method. n_max = 0 selects auto_truncate.
struct EngineOptions {
    IntegratorConfig integrator;
    int n_max = 0;
    double truncation_tol = kDefaultTruncationTol;
    SineConvention convention = SineConvention::HalfAngle;
    // Start phases averaged over by the time-domain peak-amplitude response.
    int phase_samples = 4;
    // Trace samples per drive period for the time-domain peak-amplitude response.
    int samples_per_period = 64;
    // Worker threads for sweeps; 0 = hardware concurrency.
    unsigned threads = 0;
};

struct OmegaGrid {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    std::vector<double> explicit_values;  // used instead of min/max/count when non-empty

    std::vector<double> values() const;
    static OmegaGrid linear(double min, double max, int count) { return {min, max, count, {}}; }
};

struct ScanConfig {
    DriveMode mode = DriveMode::Linear;
    double omega0 = 1.0;
    double b = 0.01;
    OmegaGrid grid;
    Method method = Method::Floquet;
    Response response = Response::PeakAmplitude;
    EngineOptions engine;
};

/// Throws ConfigError on an invalid grid, parameters, or a method/response mismatch.
void validate(const ScanConfig& cfg);

struct ScanResult {
    std::vector<double> omega_values;
    std::vector<double> response_values;
    std::optional<double> located_resonance;  // empty when there is no peak
    double shift = 0.0;                       // located_resonance - omega0 (NaN without a peak)
    Method method = Method::Floquet;
    Response response = Response::PeakAmplitude;
    ScanConfig config;
    std::vector<int> n_max_used;  // floquet only

    bool has_peak() const { return located_resonance.has_value(); }
};

ScanResult run_scan(const ScanConfig& cfg);

/// Argmax (maximize) or argmin of `values` over `abscissa`, refined by the
/// vertex of the parabola through the best grid point and its neighbours.
/// ConfigError when the extremum sits on the grid edge or the three points
/// do not bracket it.
double locate_extremum(std::span<const double> abscissa, std::span<const double> values, bool maximize);

/// Moving average of a uniformly sampled trace over windows of exactly one
/// drive period (trapezoid rule, `samples_per_period` intervals per window).
/// Element j averages samples [j, j + samples_per_period].
std::vector<double> cycle_average(std::span<const double> samples, int samples_per_period);

/// Maximum of cycle_average, refined by a parabola through the top sample.
double cycle_averaged_peak(std::span<const double> samples, int samples_per_period);

/// Time of the first Rabi maximum: the first local maximum of the
/// cycle-averaged trace that exceeds half its global maximum, refined by a
/// parabola. The trace must be uniformly sampled with samples_per_period
/// points per drive period.
double first_rabi_maximum_time(const ProbabilityTrace& trace, int samples_per_period);

/// Time-domain peak-amplitude response at one drive frequency: cycle-averaged
/// trace maximum over 1.5 generalized Rabi periods, averaged over
/// `phase_samples` evenly spaced start phases of the drive.
double peak_amplitude(const FourierHamiltonian& fh, Method method, const EngineOptions& opts);

/// One trace for the given method; Floquet and ODE start at t_grid[0], the
/// BW closed forms are P(t; 0) and need t_grid[0] >= 0.
ProbabilityTrace simulate(const FourierHamiltonian& fh, Method method, std::span<const double> t_grid,
                          const EngineOptions& opts = {});

/// opts.n_max when set, otherwise auto_truncate. Quasi-energy errors grow into
/// phase errors over time, so for a trace spanning `span` time units the
/// tolerance is truncation_tol / span (never below kTruncationTolFloor).
int resolve_n_max(const FourierHamiltonian& fh, const EngineOptions& opts, double span = 0.0);

struct ShiftReport {
    double numeric_shift = 0.0;
    double formula_exact = 0.0;   // resonance frequency from the closed form
    double formula_approx = 0.0;  // w0 (1 + (b/w0)^2)
    double relative_discrepancy = 0.0;  // (numeric - (exact - w0)) / (exact - w0)
    ScanResult scan;
};

/// Bloch-Siegert shift from a sweep. Linear drive only; method floquet or ode.
ShiftReport extract_shift(const ScanConfig& cfg);

struct CompareConfig {
    DriveMode mode = DriveMode::Linear;
    SpinParams params;
    EngineOptions engine;
};

struct MethodComparison {
    std::array<Method, 4> methods{Method::Ode, Method::Floquet, Method::Bw1, Method::Bw2};
    Eigen::Matrix4d max_deviation = Eigen::Matrix4d::Zero();  // indexed like `methods`
    std::vector<ProbabilityTrace> traces;                     // same order

    double deviation(Method a, Method b) const;
};

/// Traces for all four methods on t_grid (which must start at 0) and their
/// pairwise max pointwise |dP|.
MethodComparison compare_methods(const CompareConfig& cfg, std::span<const double> t_grid);

/// Uniform grid [t_start, t_end] with `count` points.
std::vector<double> uniform_grid(double t_start, double t_end, std::size_t count);

}  // namespace spinres
