#include "spinres/drives.hpp"

#include <cmath>
#include <sstream>

#include "spinres/diagnostics.hpp"
#include "spinres/errors.hpp"

namespace spinres {

namespace {
constexpr Complex kI{0.0, 1.0};

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }
}  // namespace

ComplexMatrix2 pauli_x() {
    ComplexMatrix2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix2 pauli_y() {
    ComplexMatrix2 m;
    m << 0.0, -kI, kI, 0.0;
    return m;
}

ComplexMatrix2 pauli_z() {
    ComplexMatrix2 m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

void validate(const SpinParams& p, bool allow_zero_coupling) {
    std::ostringstream err;
    if (!positive_finite(p.omega0)) err << "omega0 must be positive (got " << p.omega0 << "); ";
    if (!positive_finite(p.omega)) err << "omega must be positive (got " << p.omega << "); ";
    const bool b_ok = allow_zero_coupling ? (std::isfinite(p.b) && p.b >= 0.0) : positive_finite(p.b);
    if (!b_ok) err << "b must be " << (allow_zero_coupling ? "non-negative" : "positive") << " (got " << p.b << "); ";
    if (!err.str().empty()) throw ConfigError("invalid spin parameters: " + err.str());
}

void check_weak_drive(const SpinParams& p, double limit) {
    const double ratio = p.drive_ratio();
    if (ratio > limit) {
        std::ostringstream os;
        os << "b/omega0 = " << ratio << " exceeds the weak-drive limit " << limit;
        throw ConfigError(os.str());
    }
    if (ratio > kWeakDriveWarn) {
        std::ostringstream os;
        os << "b/omega0 = " << ratio << " is above " << kWeakDriveWarn
           << "; perturbative results degrade";
        warn(os.str());
    }
}

std::string_view to_string(DriveMode mode) {
    switch (mode) {
        case DriveMode::Linear: return "h1";
        case DriveMode::CircularPlus: return "h2";
        case DriveMode::CircularMinus: return "h3";
        case DriveMode::LinearTilted: return "h4";
        case DriveMode::Custom: return "custom";
    }
    return "unknown";
}

DriveMode parse_drive_mode(std::string_view text) {
    if (text == "h1" || text == "linear") return DriveMode::Linear;
    if (text == "h2" || text == "circular-plus") return DriveMode::CircularPlus;
    if (text == "h3" || text == "circular-minus") return DriveMode::CircularMinus;
    if (text == "h4" || text == "linear-tilted") return DriveMode::LinearTilted;
    if (text == "custom") return DriveMode::Custom;
    throw ConfigError("unknown drive mode '" + std::string(text) + "'");
}

FourierHamiltonian build_fourier(DriveMode mode, const SpinParams& params) {
    validate(params, /*allow_zero_coupling=*/true);
    const double b = params.b;

    FourierHamiltonian fh;
    fh.params = params;
    fh.mode = mode;
    fh.h0 = 0.5 * params.omega0 * pauli_z();

    // cos wt = (e^{iwt} + e^{-iwt})/2, sin wt = (e^{iwt} - e^{-iwt})/(2i);
    // h_plus collects the e^{+iwt} coefficients.
    switch (mode) {
        case DriveMode::Linear:
            fh.h_plus = b * pauli_x();
            break;
        case DriveMode::CircularPlus:
            fh.h_plus = 0.5 * b * (pauli_x() - kI * pauli_y());
            break;
        case DriveMode::CircularMinus:
            fh.h_plus = 0.5 * b * (pauli_x() + kI * pauli_y());
            break;
        case DriveMode::LinearTilted:
            fh.h_plus = b * pauli_x() - kI * b * pauli_z();
            break;
        case DriveMode::Custom:
            throw ConfigError("Custom drive needs explicit Fourier blocks (use custom_fourier)");
    }
    fh.h_minus = fh.h_plus.adjoint();
    return fh;
}

FourierHamiltonian custom_fourier(const ComplexMatrix2& h0, const ComplexMatrix2& h_plus,
                                  const SpinParams& params) {
    validate(params, /*allow_zero_coupling=*/true);
    const double scale = std::max(1.0, h0.cwiseAbs().maxCoeff());
    if (hermiticity_defect(h0) > 1e-14 * scale) throw ConfigError("custom drive: h0 is not Hermitian");
    if (!h0.allFinite() || !h_plus.allFinite()) throw ConfigError("custom drive: non-finite entries");
    if (std::abs(h0(0, 1)) != 0.0) {
        throw ConfigError("custom drive: h0 must be diagonal in the (alpha, beta) basis");
    }
    FourierHamiltonian fh;
    fh.h0 = h0;
    // exact Hermitian diagonal
    fh.h0(0, 0) = h0(0, 0).real();
    fh.h0(1, 1) = h0(1, 1).real();
    fh.h0(1, 0) = fh.h0(0, 1) = 0.0;
    fh.h_plus = h_plus;
    fh.h_minus = h_plus.adjoint();
    fh.params = params;
    fh.mode = DriveMode::Custom;
    return fh;
}

ComplexMatrix2 evaluate_time(const FourierHamiltonian& fh, double t) {
    const Complex phase = std::polar(1.0, fh.params.omega * t);
    ComplexMatrix2 m = fh.h0 + fh.h_plus * phase + fh.h_minus * std::conj(phase);
    // Symmetrize so the result is Hermitian to the last bit.
    m(1, 0) = std::conj(m(0, 1));
    m(0, 0) = m(0, 0).real();
    m(1, 1) = m(1, 1).real();
    return m;
}

ComplexMatrix2 lab_hamiltonian(DriveMode mode, const SpinParams& p, double t) {
    const double c = std::cos(p.omega * t);
    const double s = std::sin(p.omega * t);
    const double half = 0.5 * p.omega0;
    ComplexMatrix2 m;
    switch (mode) {
        case DriveMode::Linear:
            m << half, 2.0 * p.b * c, 2.0 * p.b * c, -half;
            return m;
        case DriveMode::CircularPlus:
            // sx cos + sy sin = [[0, e^{-iwt}], [e^{iwt}, 0]]
            m << half, p.b * Complex(c, -s), p.b * Complex(c, s), -half;
            return m;
        case DriveMode::CircularMinus:
            m << half, p.b * Complex(c, s), p.b * Complex(c, -s), -half;
            return m;
        case DriveMode::LinearTilted:
            m << half + 2.0 * p.b * s, 2.0 * p.b * c, 2.0 * p.b * c, -half - 2.0 * p.b * s;
            return m;
        case DriveMode::Custom:
            break;
    }
    throw ConfigError("lab_hamiltonian: Custom drive has no trigonometric form");
}

Complex coupling_element(const FourierHamiltonian& fh) {
    return fh.h_minus(index_of(Spin::Alpha), index_of(Spin::Beta));
}

double hermiticity_defect(const ComplexMatrix2& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace spinres
