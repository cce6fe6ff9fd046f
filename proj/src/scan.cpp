#include "spinres/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "spinres/diagnostics.hpp"
#include "spinres/errors.hpp"

namespace spinres {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs fn(i) for i in [0, n); results are written by index so output order
// never depends on scheduling. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = n;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

// Collects warnings raised during a sweep and re-emits them as one line.
class WarningAggregator {
public:
    WarningAggregator()
        : scope_([this](const std::string& msg) {
              std::lock_guard lock(mutex_);
              if (count_++ == 0) first_ = msg;
          }) {}

    // One-line summary of what was collected; empty if nothing was.
    std::string summary(std::string_view context) {
        std::lock_guard lock(mutex_);
        if (count_ == 0) return {};
        return std::string(context) + ": " + std::to_string(count_) + " warning(s), first: " + first_;
    }

private:
    std::mutex mutex_;
    std::size_t count_ = 0;
    std::string first_;
    ScopedWarningHandler scope_;
};

struct PeakWindow {
    double period;
    std::size_t periods;
};

// 1.5 generalized Rabi periods, rounded up to whole drive periods.
PeakWindow peak_window(const FourierHamiltonian& fh) {
    const double omega = fh.params.omega;
    const double period = 2.0 * std::numbers::pi / omega;
    const double detuning = omega - (fh.energy(Spin::Alpha) - fh.energy(Spin::Beta));
    const double rabi_estimate = std::hypot(2.0 * fh.params.b, detuning);
    const double window = rabi_estimate > 0.0 ? 1.5 * 2.0 * std::numbers::pi / rabi_estimate
                                              : std::numeric_limits<double>::infinity();
    return {period, static_cast<std::size_t>(std::clamp(std::ceil(window / period), 4.0, 20000.0))};
}

double vertex_offset(double x0, double x1, double x2, double y0, double y1, double y2) {
    const double d0 = x1 - x0;
    const double d2 = x1 - x2;
    const double num = d0 * d0 * (y1 - y2) - d2 * d2 * (y1 - y0);
    const double den = d0 * (y1 - y2) - d2 * (y1 - y0);
    if (den == 0.0) return 0.0;
    return -0.5 * num / den;
}

FourierHamiltonian hamiltonian_for(const ScanConfig& cfg, double omega) {
    return build_fourier(cfg.mode, SpinParams{cfg.omega0, cfg.b, omega});
}

}  // namespace

std::string_view to_string(Response r) {
    return r == Response::PeakAmplitude ? "amplitude" : "gap";
}

Response parse_response(std::string_view text) {
    if (text == "amplitude" || text == "peak_amplitude") return Response::PeakAmplitude;
    if (text == "gap" || text == "min_gap") return Response::MinGap;
    throw ConfigError("unknown response '" + std::string(text) + "'");
}

std::vector<double> OmegaGrid::values() const {
    if (!explicit_values.empty()) return explicit_values;
    std::vector<double> out;
    if (count < 1) return out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(count == 1 ? min : min + (max - min) * static_cast<double>(i) / (count - 1));
    }
    return out;
}

std::vector<double> uniform_grid(double t_start, double t_end, std::size_t count) {
    if (count < 2 || !(t_end > t_start)) throw ConfigError("uniform grid needs count >= 2 and t_end > t_start");
    std::vector<double> out(count);
    const double h = (t_end - t_start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = t_start + h * static_cast<double>(i);
    out.back() = t_end;
    return out;
}

void validate(const ScanConfig& cfg) {
    validate(SpinParams{cfg.omega0, cfg.b, cfg.omega0}, /*allow_zero_coupling=*/true);
    check_weak_drive(SpinParams{cfg.omega0, cfg.b, cfg.omega0});
    if (cfg.mode == DriveMode::Custom) throw ConfigError("sweeps support the named drive modes only");
    const auto omegas = cfg.grid.values();
    if (omegas.size() < 3) throw ConfigError("omega grid needs at least 3 points");
    if (cfg.grid.explicit_values.empty() && !(cfg.grid.min < cfg.grid.max)) {
        throw ConfigError("omega grid needs min < max");
    }
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(std::isfinite(omegas[i]) && omegas[i] > 0.0)) throw ConfigError("omega grid values must be positive");
        if (i > 0 && !(omegas[i] > omegas[i - 1])) throw ConfigError("omega grid must be strictly increasing");
    }
    if (cfg.response == Response::MinGap && cfg.method != Method::Floquet) {
        throw ConfigError("the gap response is only defined for the floquet method");
    }
    validate(cfg.engine.integrator);
    if (cfg.engine.phase_samples < 1) throw ConfigError("phase_samples must be >= 1");
    if (cfg.engine.samples_per_period < 8) throw ConfigError("samples_per_period must be >= 8");
}

double locate_extremum(std::span<const double> x, std::span<const double> y, bool maximize) {
    if (x.size() != y.size() || x.size() < 3) throw ConfigError("extremum search needs >= 3 matching points");
    const double sign = maximize ? 1.0 : -1.0;
    std::size_t best = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (sign * y[i] > sign * y[best]) best = i;
    }
    if (best == 0 || best + 1 == y.size()) {
        throw ConfigError("extremum at the grid edge (omega = " + std::to_string(x[best]) +
                          "); widen the grid to bracket the resonance");
    }
    const double y0 = sign * y[best - 1];
    const double y1 = sign * y[best];
    const double y2 = sign * y[best + 1];
    if (y1 == y0 && y1 == y2) return x[best];
    const double offset = vertex_offset(x[best - 1], x[best], x[best + 1], y0, y1, y2);
    const double located = x[best] + offset;
    const bool concave = (y1 - y0) / (x[best] - x[best - 1]) >= (y2 - y1) / (x[best + 1] - x[best]);
    if (!concave || located < x[best - 1] || located > x[best + 1]) {
        throw ConfigError("grid too coarse: refined extremum falls outside its bracketing points");
    }
    return located;
}

std::vector<double> cycle_average(std::span<const double> samples, int samples_per_period) {
    const auto s = static_cast<std::size_t>(samples_per_period);
    if (samples_per_period < 1 || samples.size() < s + 1) {
        throw ConfigError("cycle average needs at least one full drive period of samples");
    }
    std::vector<double> cumulative(samples.size(), 0.0);
    for (std::size_t i = 1; i < samples.size(); ++i) {
        cumulative[i] = cumulative[i - 1] + 0.5 * (samples[i - 1] + samples[i]);
    }
    std::vector<double> out(samples.size() - s);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = (cumulative[j + s] - cumulative[j]) / static_cast<double>(s);
    return out;
}

double cycle_averaged_peak(std::span<const double> samples, int samples_per_period) {
    const auto avg = cycle_average(samples, samples_per_period);
    const auto it = std::max_element(avg.begin(), avg.end());
    const auto k = static_cast<std::size_t>(it - avg.begin());
    if (k == 0 || k + 1 == avg.size()) return *it;
    const double y0 = avg[k - 1], y1 = avg[k], y2 = avg[k + 1];
    const double curvature = 2.0 * y1 - y0 - y2;
    if (!(curvature > 0.0)) return y1;
    return y1 + (y0 - y2) * (y0 - y2) / (8.0 * curvature);
}

double first_rabi_maximum_time(const ProbabilityTrace& trace, int samples_per_period) {
    const auto avg = cycle_average(trace.probabilities, samples_per_period);
    const auto s = static_cast<std::size_t>(samples_per_period);
    const double global = *std::max_element(avg.begin(), avg.end());
    auto centre = [&](std::size_t j) { return 0.5 * (trace.times[j] + trace.times[j + s]); };
    for (std::size_t j = 1; j + 1 < avg.size(); ++j) {
        if (avg[j] < 0.5 * global || avg[j] < avg[j - 1] || avg[j] < avg[j + 1]) continue;
        return centre(j) + vertex_offset(centre(j - 1), centre(j), centre(j + 1), avg[j - 1], avg[j], avg[j + 1]);
    }
    throw NumericalError("no Rabi maximum inside the trace window");
}

int resolve_n_max(const FourierHamiltonian& fh, const EngineOptions& opts, double span) {
    if (opts.n_max > 0) return opts.n_max;
    return auto_truncate(fh, std::max(kTruncationTolFloor, opts.truncation_tol / std::max(1.0, span)));
}

ProbabilityTrace simulate(const FourierHamiltonian& fh, Method method, std::span<const double> t_grid,
                          const EngineOptions& opts) {
    check_time_grid(t_grid);
    switch (method) {
        case Method::Floquet: {
            const double span = t_grid.back() - t_grid.front();
            const auto spec = diagonalize(assemble(fh, resolve_n_max(fh, opts, span)));
            return transition_probability_trace(spec, t_grid, t_grid.front());
        }
        case Method::Ode:
            return oracle_trace(fh, t_grid, opts.integrator);
        case Method::Bw1:
        case Method::Bw2:
            if (t_grid.front() < 0.0) throw ConfigError("BW closed forms start at t = 0");
            return bw_trace(fh, t_grid, method, opts.convention);
    }
    throw ConfigError("unknown method");
}

double peak_amplitude(const FourierHamiltonian& fh, Method method, const EngineOptions& opts) {
    if (method != Method::Floquet && method != Method::Ode) {
        throw ConfigError("time-domain peak amplitude needs the floquet or ode method");
    }
    const auto [period, periods] = peak_window(fh);
    const auto spp = static_cast<std::size_t>(opts.samples_per_period);

    std::optional<ShirleyPropagator> floquet;
    if (method == Method::Floquet) {
        floquet.emplace(diagonalize(assemble(fh, resolve_n_max(fh, opts, period * static_cast<double>(periods + 1)))));
    }

    double sum = 0.0;
    std::vector<double> grid(periods * spp + 1);
    for (int m = 0; m < opts.phase_samples; ++m) {
        const double t0 = period * m / opts.phase_samples;
        for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = t0 + period * static_cast<double>(k) / spp;
        std::vector<double> probs;
        if (floquet) {
            probs.reserve(grid.size());
            for (double t : grid) probs.push_back(clamp_probability(std::norm(floquet->amplitude(t, t0))));
        } else {
            probs = oracle_trace(fh, grid, opts.integrator).probabilities;
        }
        sum += cycle_averaged_peak(probs, opts.samples_per_period);
    }
    return sum / opts.phase_samples;
}

ScanResult run_scan(const ScanConfig& cfg) {
    validate(cfg);
    ScanResult result;
    result.config = cfg;
    result.method = cfg.method;
    result.response = cfg.response;
    result.omega_values = cfg.grid.values();
    const std::size_t n = result.omega_values.size();
    result.response_values.assign(n, 0.0);
    std::vector<double> mixing(n, 0.0);
    if (cfg.method == Method::Floquet) result.n_max_used.assign(n, 0);

    std::string deferred_warning;
    {
        WarningAggregator warnings;
        parallel_for(n, cfg.engine.threads, [&](std::size_t i) {
            const FourierHamiltonian fh = hamiltonian_for(cfg, result.omega_values[i]);
            switch (cfg.method) {
                case Method::Bw1:
                    result.response_values[i] = amplitude_factor(effective_h_order1(fh));
                    break;
                case Method::Bw2:
                    if (fh.mode == DriveMode::Linear) {
                        result.response_values[i] = amplitude_factor_order2(fh);
                    } else {
                        check_near_resonance(fh);
                        result.response_values[i] = amplitude_factor(effective_h_general(fh, 2));
                    }
                    break;
                case Method::Floquet: {
                    const auto [period, periods] = peak_window(fh);
                    const double span =
                        cfg.response == Response::MinGap ? 0.0 : period * static_cast<double>(periods + 1);
                    const int n_max = resolve_n_max(fh, cfg.engine, span);
                    result.n_max_used[i] = n_max;
                    if (cfg.response == Response::MinGap) {
                        const ResonantPair pair = resonant_pair(diagonalize(assemble(fh, n_max)));
                        result.response_values[i] = pair.gap();
                        mixing[i] = pair.mixing;
                    } else {
                        EngineOptions fixed = cfg.engine;
                        fixed.n_max = n_max;
                        result.response_values[i] = peak_amplitude(fh, Method::Floquet, fixed);
                    }
                    break;
                }
                case Method::Ode:
                    result.response_values[i] = peak_amplitude(fh, Method::Ode, cfg.engine);
                    break;
            }
        });
        deferred_warning = warnings.summary("sweep");
    }
    if (!deferred_warning.empty()) warn(deferred_warning);

    const auto& y = result.response_values;
    bool has_peak = false;
    if (cfg.response == Response::MinGap) {
        const auto k = static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());
        has_peak = mixing[k] > kNoPeakThreshold;
    } else {
        has_peak = *std::max_element(y.begin(), y.end()) > kNoPeakThreshold;
    }
    if (has_peak) {
        result.located_resonance =
            locate_extremum(result.omega_values, y, /*maximize=*/cfg.response == Response::PeakAmplitude);
        result.shift = *result.located_resonance - cfg.omega0;
    } else {
        result.shift = kNaN;
    }
    return result;
}

ShiftReport extract_shift(const ScanConfig& cfg) {
    if (cfg.mode == DriveMode::CircularPlus) {
        throw ConfigError("the circular drive has no Bloch-Siegert shift (its first-order resonance is exact)");
    }
    if (cfg.mode != DriveMode::Linear) throw ConfigError("shift extraction is defined for the linear drive (h1)");
    if (cfg.method != Method::Floquet && cfg.method != Method::Ode) {
        throw ConfigError("shift extraction needs the floquet or ode method");
    }
    ShiftReport report;
    report.scan = run_scan(cfg);
    if (!report.scan.has_peak()) throw NumericalError("no resonance found in the sweep");
    const auto bs = bloch_siegert_resonance(SpinParams{cfg.omega0, cfg.b, cfg.omega0});
    report.numeric_shift = report.scan.shift;
    report.formula_exact = bs.exact;
    report.formula_approx = bs.approx;
    const double predicted = bs.exact - cfg.omega0;
    report.relative_discrepancy = predicted != 0.0 ? (report.numeric_shift - predicted) / predicted : kNaN;
    return report;
}

double MethodComparison::deviation(Method a, Method b) const {
    auto index = [&](Method m) {
        return static_cast<Eigen::Index>(std::find(methods.begin(), methods.end(), m) - methods.begin());
    };
    return max_deviation(index(a), index(b));
}

MethodComparison compare_methods(const CompareConfig& cfg, std::span<const double> t_grid) {
    check_time_grid(t_grid);
    if (t_grid.front() != 0.0) throw ConfigError("method comparison needs a time grid starting at t = 0");
    const FourierHamiltonian fh = build_fourier(cfg.mode, cfg.params);
    MethodComparison out;
    out.traces.resize(out.methods.size());
    for (std::size_t i = 0; i < out.methods.size(); ++i) out.traces[i] = simulate(fh, out.methods[i], t_grid, cfg.engine);
    for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            out.max_deviation(i, j) = max_deviation(out.traces[static_cast<std::size_t>(i)],
                                                    out.traces[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

}  // namespace spinres
