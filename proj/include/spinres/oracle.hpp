#pragma once

#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinres/drives.hpp"
#include "spinres/trace.hpp"

namespace spinres {

// Direct integration of i d/dt |psi> = H(t) |psi> in the lab frame. This is
// the reference every other method is checked against.

using StateVector2 = Eigen::Vector2cd;

enum class Scheme {
    FixedRk4,      ///< classical RK4 at a fixed step
    StepDoubling,  ///< RK4 with step-doubling error control and local extrapolation
};

struct IntegratorConfig {
    double dt_max = std::numeric_limits<double>::infinity();
    int steps_per_drive_period = 2048;
    Scheme scheme = Scheme::FixedRk4;
    // Local error target per step for StepDoubling.
    double tolerance = 1e-13;
    // |<psi|psi> - 1| beyond this aborts the run.
    double drift_abort = 1e-8;

    /// min(dt_max, (2 pi / omega) / steps_per_drive_period)
    double effective_dt(double omega) const;
};

inline constexpr int kMinStepsPerPeriod = 256;

void validate(const IntegratorConfig& cfg);

/// Time-domain Hamiltonian used by the integrator: the trigonometric form for
/// the named drives, evaluate_time for Custom.
class LabHamiltonian {
public:
    explicit LabHamiltonian(const FourierHamiltonian& fh) : fh_(fh) {}
    ComplexMatrix2 operator()(double t) const;
    const FourierHamiltonian& fourier() const { return fh_; }

private:
    FourierHamiltonian fh_;
};

/// States at every grid point, starting from psi0 at t_grid[0]. Never
/// renormalizes; NumericalError on step underflow or when the norm drifts
/// past cfg.drift_abort.
std::vector<StateVector2> integrate(const FourierHamiltonian& fh, const StateVector2& psi0,
                                    std::span<const double> t_grid, const IntegratorConfig& cfg = {});
std::vector<StateVector2> integrate(DriveMode mode, const SpinParams& params, const StateVector2& psi0,
                                    std::span<const double> t_grid, const IntegratorConfig& cfg = {});

/// |<beta|psi(t)>|^2 from psi(t_grid[0]) = |alpha>; method = ode.
ProbabilityTrace oracle_trace(const FourierHamiltonian& fh, std::span<const double> t_grid,
                              const IntegratorConfig& cfg = {});
ProbabilityTrace oracle_trace(DriveMode mode, const SpinParams& params, std::span<const double> t_grid,
                              const IntegratorConfig& cfg = {});

/// max over states of | ||psi||^2 - 1 |
double unitarity_defect(std::span<const StateVector2> states);

/// One classical RK4 step of size h from (t, psi).
StateVector2 rk4_step(const LabHamiltonian& h, double t, const StateVector2& psi, double step);

}  // namespace spinres
