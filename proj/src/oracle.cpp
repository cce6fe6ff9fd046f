#include "spinres/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spinres/errors.hpp"

namespace spinres {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

void check_norm(const StateVector2& psi, double t, const IntegratorConfig& cfg) {
    const double drift = std::abs(psi.squaredNorm() - 1.0);
    if (!(drift <= cfg.drift_abort)) {
        std::ostringstream os;
        os << "norm drift " << drift << " at t = " << t << " exceeds " << cfg.drift_abort
           << " (steps_per_drive_period = " << cfg.steps_per_drive_period << ")";
        throw NumericalError(os.str());
    }
}

void check_underflow(double step, double t) {
    if (!(step > 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))) {
        std::ostringstream os;
        os << "integrator step size underflow at t = " << t << " (step " << step << ")";
        throw NumericalError(os.str());
    }
}

// Fixed-step RK4 from a to b. The last step is shortened to land on b; step
// times are a + k h so runs started a whole number of drive periods apart
// sample H(t) at identical phases.
StateVector2 advance_fixed(const LabHamiltonian& h, StateVector2 psi, double a, double b, double dt) {
    const double span = b - a;
    const auto steps = static_cast<long long>(std::ceil(span / dt * (1.0 - 1e-12)));
    const double step = span / static_cast<double>(std::max<long long>(steps, 1));
    check_underflow(step, a);
    for (long long k = 0; k < std::max<long long>(steps, 1); ++k) {
        psi = rk4_step(h, a + static_cast<double>(k) * step, psi, step);
    }
    return psi;
}

struct AdaptiveState {
    double step;
};

StateVector2 advance_step_doubling(const LabHamiltonian& h, StateVector2 psi, double a, double b, double dt_cap,
                                   double tol, AdaptiveState& st) {
    double t = a;
    while (t < b) {
        double step = std::min({st.step, dt_cap, b - t});
        for (;;) {
            check_underflow(step, t);
            const StateVector2 coarse = rk4_step(h, t, psi, step);
            const StateVector2 half = rk4_step(h, t, psi, 0.5 * step);
            const StateVector2 fine = rk4_step(h, t + 0.5 * step, half, 0.5 * step);
            const double err = (fine - coarse).norm() / 15.0;
            if (err <= tol || step <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
                psi = fine + (fine - coarse) / 15.0;
                t = (b - t - step <= 1e-15 * std::max(1.0, std::abs(b))) ? b : t + step;
                const double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 4.0;
                st.step = step * std::clamp(grow, 0.2, 4.0);
                break;
            }
            step *= std::clamp(0.9 * std::pow(tol / err, 0.2), 0.1, 0.5);
        }
    }
    return psi;
}

}  // namespace

double IntegratorConfig::effective_dt(double omega) const {
    const double per_period = 2.0 * std::numbers::pi / omega / static_cast<double>(steps_per_drive_period);
    return std::min(dt_max, per_period);
}

void validate(const IntegratorConfig& cfg) {
    if (cfg.steps_per_drive_period < kMinStepsPerPeriod) {
        throw ConfigError("steps_per_drive_period must be >= " + std::to_string(kMinStepsPerPeriod));
    }
    if (!(cfg.dt_max > 0.0)) throw ConfigError("dt_max must be positive");
    if (!(cfg.tolerance > 0.0)) throw ConfigError("integrator tolerance must be positive");
    if (!(cfg.drift_abort > 0.0)) throw ConfigError("drift_abort must be positive");
}

ComplexMatrix2 LabHamiltonian::operator()(double t) const {
    if (fh_.mode == DriveMode::Custom) return evaluate_time(fh_, t);
    return lab_hamiltonian(fh_.mode, fh_.params, t);
}

StateVector2 rk4_step(const LabHamiltonian& h, double t, const StateVector2& psi, double step) {
    const ComplexMatrix2 h_start = h(t);
    const ComplexMatrix2 h_mid = h(t + 0.5 * step);
    const ComplexMatrix2 h_end = h(t + step);
    const StateVector2 k1 = kMinusI * (h_start * psi);
    const StateVector2 k2 = kMinusI * (h_mid * (psi + 0.5 * step * k1));
    const StateVector2 k3 = kMinusI * (h_mid * (psi + 0.5 * step * k2));
    const StateVector2 k4 = kMinusI * (h_end * (psi + step * k3));
    return psi + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<StateVector2> integrate(const FourierHamiltonian& fh, const StateVector2& psi0,
                                    std::span<const double> t_grid, const IntegratorConfig& cfg) {
    validate(fh.params, /*allow_zero_coupling=*/true);
    validate(cfg);
    check_time_grid(t_grid);
    if (std::abs(psi0.squaredNorm() - 1.0) > 1e-12) throw ConfigError("initial state must be normalized");

    const LabHamiltonian h(fh);
    const double dt = cfg.effective_dt(fh.params.omega);
    AdaptiveState adaptive{dt};

    std::vector<StateVector2> states;
    states.reserve(t_grid.size());
    StateVector2 psi = psi0;
    states.push_back(psi);
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double a = t_grid[i - 1];
        const double b = t_grid[i];
        psi = cfg.scheme == Scheme::FixedRk4 ? advance_fixed(h, psi, a, b, dt)
                                             : advance_step_doubling(h, psi, a, b, dt, cfg.tolerance, adaptive);
        if (!psi.allFinite()) throw NumericalError("integrator produced a non-finite state");
        check_norm(psi, b, cfg);
        states.push_back(psi);
    }
    return states;
}

std::vector<StateVector2> integrate(DriveMode mode, const SpinParams& params, const StateVector2& psi0,
                                    std::span<const double> t_grid, const IntegratorConfig& cfg) {
    return integrate(build_fourier(mode, params), psi0, t_grid, cfg);
}

ProbabilityTrace oracle_trace(const FourierHamiltonian& fh, std::span<const double> t_grid,
                              const IntegratorConfig& cfg) {
    const auto states = integrate(fh, StateVector2(1.0, 0.0), t_grid, cfg);
    ProbabilityTrace trace;
    trace.method = Method::Ode;
    trace.params = fh.params;
    trace.mode = fh.mode;
    trace.times.assign(t_grid.begin(), t_grid.end());
    trace.probabilities.reserve(states.size());
    for (const auto& psi : states) trace.probabilities.push_back(clamp_probability(std::norm(psi(1))));
    return trace;
}

ProbabilityTrace oracle_trace(DriveMode mode, const SpinParams& params, std::span<const double> t_grid,
                              const IntegratorConfig& cfg) {
    return oracle_trace(build_fourier(mode, params), t_grid, cfg);
}

double unitarity_defect(std::span<const StateVector2> states) {
    double worst = 0.0;
    for (const auto& psi : states) worst = std::max(worst, std::abs(psi.squaredNorm() - 1.0));
    return worst;
}

}  // namespace spinres
