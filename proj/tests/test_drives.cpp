#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "spinres/drives.hpp"
#include "spinres/errors.hpp"

using namespace spinres;

namespace {

constexpr std::array kNamedModes{DriveMode::Linear, DriveMode::CircularPlus, DriveMode::CircularMinus,
                                 DriveMode::LinearTilted};

// Drive Hamiltonians written out entry by entry, independent of the Pauli helpers.
ComplexMatrix2 written_out(DriveMode mode, const SpinParams& p, double t) {
    const double c = std::cos(p.omega * t);
    const double s = std::sin(p.omega * t);
    const Complex i{0.0, 1.0};
    const double h = 0.5 * p.omega0;
    ComplexMatrix2 m;
    switch (mode) {
        case DriveMode::Linear:
            m << h, 2.0 * p.b * c, 2.0 * p.b * c, -h;
            break;
        case DriveMode::CircularPlus:
            // sx cos + sy sin: upper entry cos - i sin
            m << h, p.b * (c - i * s), p.b * (c + i * s), -h;
            break;
        case DriveMode::CircularMinus:
            m << h, p.b * (c + i * s), p.b * (c - i * s), -h;
            break;
        case DriveMode::LinearTilted:
            m << h + 2.0 * p.b * s, 2.0 * p.b * c, 2.0 * p.b * c, -h - 2.0 * p.b * s;
            break;
        default:
            FAIL("unexpected mode");
    }
    return m;
}

double max_abs(const ComplexMatrix2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("linear drive splits into equal e^{+iwt} and e^{-iwt} halves") {
    const auto fh = build_fourier(DriveMode::Linear, {1.0, 0.01, 1.0});
    ComplexMatrix2 expected;
    expected << 0.0, 0.01, 0.01, 0.0;
    CHECK(max_abs(fh.h_plus - expected) == 0.0);
    CHECK(max_abs(fh.h_minus - expected) == 0.0);
    CHECK(fh.h0(0, 0).real() == 0.5);
    CHECK(fh.h0(1, 1).real() == -0.5);
}

TEST_CASE("circular drives carry a single off-diagonal Fourier entry") {
    const SpinParams p{1.0, 0.01, 1.0};
    const auto plus = build_fourier(DriveMode::CircularPlus, p);
    const auto minus = build_fourier(DriveMode::CircularMinus, p);

    // e^{+iwt} coefficients collected from cos = (e^{+}+e^{-})/2, sin = (e^{+}-e^{-})/(2i).
    CHECK(std::abs(plus.h_plus(1, 0) - Complex(0.01, 0.0)) < 1e-18);
    CHECK(std::abs(plus.h_plus(0, 1)) == 0.0);
    CHECK(std::abs(minus.h_plus(0, 1) - Complex(0.01, 0.0)) < 1e-18);
    CHECK(std::abs(minus.h_plus(1, 0)) == 0.0);
    CHECK(max_abs(plus.h_minus - plus.h_plus.adjoint()) == 0.0);
    CHECK(max_abs(minus.h_minus - minus.h_plus.adjoint()) == 0.0);
}

TEST_CASE("tilted drive adds an imaginary sz component") {
    const auto fh = build_fourier(DriveMode::LinearTilted, {1.0, 0.02, 0.99});
    CHECK(std::abs(fh.h_plus(0, 1) - Complex(0.02, 0.0)) < 1e-18);
    CHECK(std::abs(fh.h_plus(0, 0) - Complex(0.0, -0.02)) < 1e-18);
    CHECK(std::abs(fh.h_plus(1, 1) - Complex(0.0, 0.02)) < 1e-18);
}

TEST_CASE("coupling element discriminates resonant drives") {
    const SpinParams p{1.0, 0.01, 1.0};
    CHECK(coupling_element(build_fourier(DriveMode::Linear, p)) == Complex(0.01, 0.0));
    CHECK(coupling_element(build_fourier(DriveMode::CircularPlus, p)) == Complex(0.01, 0.0));
    CHECK(coupling_element(build_fourier(DriveMode::LinearTilted, p)) == Complex(0.01, 0.0));
    CHECK(coupling_element(build_fourier(DriveMode::CircularMinus, p)) == Complex(0.0, 0.0));
}

TEST_CASE("evaluate_time at special phases") {
    const SpinParams p{1.0, 0.01, 1.0};
    ComplexMatrix2 at_zero;
    at_zero << 0.5, 0.02, 0.02, -0.5;
    CHECK(max_abs(evaluate_time(build_fourier(DriveMode::Linear, p), 0.0) - at_zero) < 1e-16);

    const double quarter = std::numbers::pi / (2.0 * p.omega);
    ComplexMatrix2 bare;
    bare << 0.5, 0.0, 0.0, -0.5;
    CHECK(max_abs(evaluate_time(build_fourier(DriveMode::Linear, p), quarter) - bare) < 1e-16);

    ComplexMatrix2 tilted;
    tilted << 0.52, 0.0, 0.0, -0.52;
    CHECK(max_abs(evaluate_time(build_fourier(DriveMode::LinearTilted, p), quarter) - tilted) < 1e-15);
}

TEST_CASE("Fourier form reconstructs the trigonometric drive, stays Hermitian and periodic") {
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto mode : kNamedModes) {
        CAPTURE(to_string(mode));
        const SpinParams p{1.0 + 0.5 * unit(rng), 0.2 * unit(rng) + 1e-3, 0.8 + 0.4 * unit(rng)};
        const auto fh = build_fourier(mode, p);
        const double period = 2.0 * std::numbers::pi / p.omega;
        double worst_rebuild = 0.0, worst_lab = 0.0, worst_herm = 0.0, worst_period = 0.0;
        for (int k = 0; k < 100; ++k) {
            const double t = period * unit(rng);
            const auto h = evaluate_time(fh, t);
            worst_rebuild = std::max(worst_rebuild, max_abs(h - written_out(mode, p, t)));
            worst_lab = std::max(worst_lab, max_abs(lab_hamiltonian(mode, p, t) - written_out(mode, p, t)));
            worst_herm = std::max(worst_herm, hermiticity_defect(h));
            worst_period = std::max(worst_period, max_abs(evaluate_time(fh, t + period) - h));
        }
        CHECK(worst_rebuild <= 1e-14);
        CHECK(worst_lab <= 1e-14);
        CHECK(worst_herm <= 1e-15);
        CHECK(worst_period <= 1e-13);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(SpinParams{0.0, 0.01, 1.0}), ConfigError);
    CHECK_THROWS_AS(validate(SpinParams{1.0, -0.01, 1.0}), ConfigError);
    CHECK_THROWS_AS(validate(SpinParams{1.0, 0.01, 0.0}), ConfigError);
    CHECK_THROWS_AS(validate(SpinParams{1.0, 0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(validate(SpinParams{1.0, std::nan(""), 1.0}), ConfigError);
    CHECK_NOTHROW(validate(SpinParams{1.0, 0.0, 1.0}, true));
    CHECK_THROWS_AS(build_fourier(DriveMode::Linear, {-1.0, 0.01, 1.0}), ConfigError);
    CHECK_THROWS_AS(build_fourier(DriveMode::Custom, {1.0, 0.01, 1.0}), ConfigError);
    CHECK_THROWS_AS(check_weak_drive(SpinParams{1.0, 0.3, 1.0}), ConfigError);
    CHECK_NOTHROW(check_weak_drive(SpinParams{1.0, 0.25, 1.0}));
}

TEST_CASE("custom drives") {
    ComplexMatrix2 h0;
    h0 << 0.5, 0.0, 0.0, -0.5;
    ComplexMatrix2 hp;
    hp << 0.0, 0.01, 0.01, 0.0;
    const auto fh = custom_fourier(h0, hp, {1.0, 0.01, 1.0});
    CHECK(fh.mode == DriveMode::Custom);
    CHECK(max_abs(fh.h_minus - hp.adjoint()) == 0.0);
    const auto linear = build_fourier(DriveMode::Linear, {1.0, 0.01, 1.0});
    CHECK(max_abs(evaluate_time(fh, 0.37) - evaluate_time(linear, 0.37)) < 1e-16);

    ComplexMatrix2 not_hermitian = h0;
    not_hermitian(0, 1) = Complex(0.0, 0.1);
    CHECK_THROWS_AS(custom_fourier(not_hermitian, hp, {1.0, 0.01, 1.0}), ConfigError);
}

TEST_CASE("mode names round-trip") {
    for (const auto mode : kNamedModes) CHECK(parse_drive_mode(to_string(mode)) == mode);
    CHECK(parse_drive_mode("linear") == DriveMode::Linear);
    CHECK_THROWS_AS(parse_drive_mode("h5"), ConfigError);
}
