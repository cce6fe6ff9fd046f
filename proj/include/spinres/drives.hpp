#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace spinres {

using Complex = std::complex<double>;

// 2x2 operator on (|alpha> = spin up = index 0, |beta> = spin down = index 1).
using ComplexMatrix2 = Eigen::Matrix2cd;

enum class Spin : int { Alpha = 0, Beta = 1 };

constexpr int index_of(Spin s) { return static_cast<int>(s); }

ComplexMatrix2 pauli_x();
ComplexMatrix2 pauli_y();
ComplexMatrix2 pauli_z();

/// Two-level spin parameters, hbar = 1, all angular frequencies.
struct SpinParams {
    double omega0 = 1.0;  ///< intrinsic resonance frequency
    double b = 0.0;       ///< spin-field coupling strength
    double omega = 1.0;   ///< drive frequency

    double detuning() const { return omega - omega0; }
    double drive_ratio() const { return b / omega0; }
};

/// Throws ConfigError unless omega0, b and omega are finite and positive.
/// `allow_zero_coupling` admits b = 0 (the undriven reference problem).
void validate(const SpinParams& p, bool allow_zero_coupling = false);

// b/omega0 above this is rejected by the perturbative routines.
inline constexpr double kWeakDriveLimit = 0.25;
// b/omega0 above this still runs but emits a warning.
inline constexpr double kWeakDriveWarn = 0.1;

/// Weak-drive guard used by the BW routines: ConfigError above `limit`,
/// warning above kWeakDriveWarn.
void check_weak_drive(const SpinParams& p, double limit = kWeakDriveLimit);

enum class DriveMode {
    Linear,         ///< H1: w0/2 sz + 2b sx cos wt
    CircularPlus,   ///< H2: w0/2 sz + b (sx cos wt + sy sin wt)
    CircularMinus,  ///< H3: w0/2 sz + b (sx cos wt - sy sin wt)
    LinearTilted,   ///< H4: w0/2 sz + 2b (sx cos wt + sz sin wt)
    Custom,
};

std::string_view to_string(DriveMode mode);

/// Accepts "h1".."h4" as well as the enumerator names in lower case
/// ("linear", "circular-plus", ...).
DriveMode parse_drive_mode(std::string_view text);

/// H(t) = h0 + h_plus e^{+iwt} + h_minus e^{-iwt}, with h_minus = h_plus^dagger.
struct FourierHamiltonian {
    ComplexMatrix2 h0 = ComplexMatrix2::Zero();
    ComplexMatrix2 h_plus = ComplexMatrix2::Zero();
    ComplexMatrix2 h_minus = ComplexMatrix2::Zero();
    SpinParams params;
    DriveMode mode = DriveMode::Custom;

    double energy(Spin s) const { return h0(index_of(s), index_of(s)).real(); }
};

/// Fourier blocks of the four named drives. Custom needs a payload and is
/// rejected here; use custom_fourier. b = 0 is accepted (drive off).
FourierHamiltonian build_fourier(DriveMode mode, const SpinParams& params);

/// Arbitrary three-term drive. h0 must be Hermitian; h_minus is set to
/// h_plus^dagger. params.omega0 is only used for weak-drive guards and
/// reporting; the level energies come from h0.
FourierHamiltonian custom_fourier(const ComplexMatrix2& h0, const ComplexMatrix2& h_plus,
                                  const SpinParams& params);

/// H0 + H1 e^{iwt} + H-1 e^{-iwt}.
ComplexMatrix2 evaluate_time(const FourierHamiltonian& fh, double t);

/// The named drives written directly in trigonometric form, without going
/// through the Fourier blocks. The ODE oracle integrates this.
ComplexMatrix2 lab_hamiltonian(DriveMode mode, const SpinParams& params, double t);

/// Resonance discriminant: the Floquet matrix element <alpha,0|H|beta,1>
/// linking the near-degenerate pair, i.e. <alpha|H^{-1}|beta> =
/// conj(<beta|H^{1}|alpha>) with H^{1} the e^{+iwt} block. Nonzero means a
/// first-order resonance at w ~ w0; zero means none.
Complex coupling_element(const FourierHamiltonian& fh);

double hermiticity_defect(const ComplexMatrix2& m);

}  // namespace spinres
