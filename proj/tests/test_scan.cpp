#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "spinres/diagnostics.hpp"
#include "spinres/errors.hpp"
#include "spinres/report.hpp"
#include "spinres/scan.hpp"

using namespace spinres;

namespace {

ScanConfig sweep(DriveMode mode, double b, double lo, double hi, int count, Method method, Response response) {
    ScanConfig cfg;
    cfg.mode = mode;
    cfg.omega0 = 1.0;
    cfg.b = b;
    cfg.grid = OmegaGrid::linear(lo, hi, count);
    cfg.method = method;
    cfg.response = response;
    return cfg;
}

ScanConfig gap_sweep(double b, int count = 41) {
    return sweep(DriveMode::Linear, b, 1.0 - 2.0 * b, 1.0 + 2.0 * b, count, Method::Floquet, Response::MinGap);
}

double predicted_shift(double b) { return bloch_siegert_resonance({1.0, b, 1.0}).exact - 1.0; }

std::vector<double> rabi_grid(const SpinParams& p, std::size_t count = 801) {
    const double rabi = std::hypot(2.0 * p.b, p.omega - p.omega0);
    return uniform_grid(0.0, 4.0 * std::numbers::pi / rabi, count);
}

}  // namespace

TEST_CASE("first-order sweep peaks at the bare resonance") {
    ScopedWarningHandler quiet({});
    const double b = 0.01;
    const auto result = run_scan(sweep(DriveMode::Linear, b, 1.0 - 5.0 * b, 1.0 + 5.0 * b, 41, Method::Bw1,
                                       Response::PeakAmplitude));
    REQUIRE(result.has_peak());
    CHECK(std::abs(*result.located_resonance - 1.0) <= 1e-12);
    CHECK(std::abs(result.shift) <= 1e-12);
    CHECK(result.omega_values.size() == 41);
    CHECK(result.response_values[20] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Floquet gap sweep finds the shifted resonance") {
    const auto result = run_scan(gap_sweep(0.05));
    REQUIRE(result.has_peak());
    const double predicted = predicted_shift(0.05);
    MESSAGE("located " << *result.located_resonance << ", predicted " << 1.0 + predicted);
    CHECK(std::abs(result.shift - predicted) <= 0.1 * predicted);
    CHECK(*result.located_resonance >= result.omega_values.front());
    CHECK(*result.located_resonance <= result.omega_values.back());
    for (const int n : result.n_max_used) CHECK(n >= kMinNmax);
}

TEST_CASE("counter-rotating drive shows no peak for any method") {
    ScopedWarningHandler quiet({});
    const double b = 0.01;
    struct Case {
        Method method;
        Response response;
        int count;
    };
    for (const auto c : {Case{Method::Bw1, Response::PeakAmplitude, 41}, Case{Method::Bw2, Response::PeakAmplitude, 41},
                         Case{Method::Floquet, Response::PeakAmplitude, 9}, Case{Method::Floquet, Response::MinGap, 41},
                         Case{Method::Ode, Response::PeakAmplitude, 5}}) {
        CAPTURE(to_string(c.method));
        CAPTURE(to_string(c.response));
        const auto result =
            run_scan(sweep(DriveMode::CircularMinus, b, 0.95, 1.05, c.count, c.method, c.response));
        CHECK_FALSE(result.has_peak());
        CHECK(std::isnan(result.shift));
        if (c.response == Response::PeakAmplitude) {
            for (const double v : result.response_values) CHECK(v <= 1e-3);
        }
    }
}

TEST_CASE("shift extraction") {
    const auto report = extract_shift(gap_sweep(0.05));
    CHECK(std::abs(report.numeric_shift - (report.formula_exact - 1.0)) <= 2.5e-4);
    CHECK(report.numeric_shift == doctest::Approx(2.5e-3).epsilon(0.1));
    CHECK(report.formula_approx == doctest::Approx(1.0025).epsilon(1e-15));
    CHECK(std::abs(report.relative_discrepancy) <= 0.1);

    const double s1 = extract_shift(gap_sweep(0.01)).numeric_shift;
    const double s_half = extract_shift(gap_sweep(0.005)).numeric_shift;
    CHECK(s1 == doctest::Approx(1e-4).epsilon(0.15));
    CHECK(s1 / s_half == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("shift extrapolates to zero with the drive") {
    // Least-squares line through (b^2, shift); its intercept is the b -> 0 limit.
    std::vector<double> x, y;
    for (const double b : {0.01, 0.02, 0.03}) {
        x.push_back(b * b);
        y.push_back(extract_shift(gap_sweep(b)).numeric_shift);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / 3.0;
        my += y[i] / 3.0;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    MESSAGE("slope " << slope << ", intercept " << intercept);
    CHECK(std::abs(intercept) <= 1e-6);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("shift extraction refuses other drives and methods") {
    auto cfg = gap_sweep(0.05);
    cfg.mode = DriveMode::CircularPlus;
    CHECK_THROWS_AS(extract_shift(cfg), ConfigError);
    cfg.mode = DriveMode::LinearTilted;
    CHECK_THROWS_AS(extract_shift(cfg), ConfigError);
    cfg = gap_sweep(0.05);
    cfg.method = Method::Bw1;
    cfg.response = Response::PeakAmplitude;
    CHECK_THROWS_AS(extract_shift(cfg), ConfigError);
}

TEST_CASE("sweep validation") {
    CHECK_THROWS_AS(run_scan(sweep(DriveMode::Linear, 0.01, 0.9, 1.1, 2, Method::Bw1, Response::PeakAmplitude)),
                    ConfigError);
    CHECK_THROWS_AS(run_scan(sweep(DriveMode::Linear, 0.01, 1.1, 0.9, 11, Method::Bw1, Response::PeakAmplitude)),
                    ConfigError);
    CHECK_THROWS_AS(run_scan(sweep(DriveMode::Linear, 0.01, 0.9, 1.1, 11, Method::Bw1, Response::MinGap)),
                    ConfigError);
    CHECK_THROWS_AS(run_scan(sweep(DriveMode::Linear, 0.3, 0.9, 1.1, 11, Method::Floquet, Response::MinGap)),
                    ConfigError);
    CHECK_THROWS_AS(run_scan(sweep(DriveMode::Custom, 0.01, 0.9, 1.1, 11, Method::Bw1, Response::PeakAmplitude)),
                    ConfigError);
    auto cfg = sweep(DriveMode::Linear, 0.01, 0.9, 1.1, 11, Method::Bw1, Response::PeakAmplitude);
    cfg.grid.explicit_values = {0.99, 1.0, 0.995};
    CHECK_THROWS_AS(run_scan(cfg), ConfigError);
    // Peak outside the grid.
    ScopedWarningHandler quiet({});
    CHECK_THROWS_AS(run_scan(sweep(DriveMode::Linear, 0.01, 1.01, 1.05, 11, Method::Bw1, Response::PeakAmplitude)),
                    ConfigError);
}

TEST_CASE("peak location is scale free and refines consistently") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y{0.1, 0.5, 0.9, 0.7, 0.2};
    std::vector<double> scaled(y);
    for (double& v : scaled) v *= 37.5;
    const double loc = locate_extremum(x, y, true);
    CHECK(locate_extremum(x, scaled, true) == doctest::Approx(loc).epsilon(1e-15));
    CHECK(loc > 1.0);
    CHECK(loc < 3.0);
    CHECK_THROWS_AS(locate_extremum(x, std::vector<double>{1, 2, 3, 4, 5}, true), ConfigError);

    const auto coarse = run_scan(gap_sweep(0.05, 21));
    const auto fine = run_scan(gap_sweep(0.05, 41));
    const double spacing = coarse.omega_values[1] - coarse.omega_values[0];
    CHECK(std::abs(*coarse.located_resonance - *fine.located_resonance) < spacing);
}

TEST_CASE("sweeps are deterministic regardless of thread count") {
    auto cfg = gap_sweep(0.05, 21);
    cfg.engine.threads = 1;
    const auto serial = scan_csv(run_scan(cfg));
    cfg.engine.threads = 4;
    const auto parallel = scan_csv(run_scan(cfg));
    CHECK(serial == parallel);
    CHECK(scan_csv(run_scan(cfg)) == parallel);
}

TEST_CASE("cycle averaging") {
    const int spp = 32;
    std::vector<double> constant(5 * spp + 1, 0.25);
    for (const double v : cycle_average(constant, spp)) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));

    std::vector<double> wave;
    for (int k = 0; k <= 5 * spp; ++k) wave.push_back(std::pow(std::sin(std::numbers::pi * k / spp), 2));
    for (const double v : cycle_average(wave, spp)) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(cycle_average(std::vector<double>(spp, 0.0), spp), ConfigError);
}

TEST_CASE("time-domain peak amplitude") {
    EngineOptions opts;
    const auto circular = build_fourier(DriveMode::CircularPlus, {1.0, 0.01, 1.0});
    const double on = peak_amplitude(circular, Method::Floquet, opts);
    CHECK(on <= 1.0);
    CHECK(on >= 0.998);

    const auto detuned = build_fourier(DriveMode::CircularPlus, {1.0, 0.01, 1.02});
    CHECK(peak_amplitude(detuned, Method::Floquet, opts) == doctest::Approx(0.5).epsilon(0.01));

    const auto linear = build_fourier(DriveMode::Linear, {1.0, 0.02, 1.01});
    CHECK(std::abs(peak_amplitude(linear, Method::Floquet, opts) - peak_amplitude(linear, Method::Ode, opts)) <= 1e-8);
    CHECK_THROWS_AS(peak_amplitude(linear, Method::Bw1, opts), ConfigError);
}

TEST_CASE("method comparison") {
    ScopedWarningHandler quiet({});
    for (const double k : {-5.0, -1.0, 0.0, 3.0}) {
        CompareConfig cfg;
        cfg.mode = DriveMode::CircularPlus;
        cfg.params = {1.0, 0.01, 1.0 + k * 0.01};
        const auto cmp = compare_methods(cfg, rabi_grid(cfg.params));
        CHECK(cmp.deviation(Method::Ode, Method::Bw1) <= 1e-8);
        CHECK(cmp.deviation(Method::Ode, Method::Floquet) <= 1e-8);
        CHECK(cmp.max_deviation.diagonal().cwiseAbs().maxCoeff() == 0.0);
        CHECK((cmp.max_deviation - cmp.max_deviation.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }

    CompareConfig weak;
    weak.mode = DriveMode::Linear;
    weak.params = {1.0, 0.005, 1.0};
    const auto w = compare_methods(weak, rabi_grid(weak.params, 2001));
    CHECK(w.deviation(Method::Ode, Method::Floquet) <= 1e-8);
    CHECK(w.deviation(Method::Ode, Method::Bw1) <= 10.0 * 0.005);

    CompareConfig shifted;
    shifted.mode = DriveMode::Linear;
    shifted.params = {1.0, 0.05, bloch_siegert_resonance({1.0, 0.05, 1.0}).exact};
    const auto s = compare_methods(shifted, rabi_grid(shifted.params, 2001));
    MESSAGE("ode-bw1 " << s.deviation(Method::Ode, Method::Bw1) << ", ode-bw2 " << s.deviation(Method::Ode, Method::Bw2));
    CHECK(s.deviation(Method::Ode, Method::Bw2) < s.deviation(Method::Ode, Method::Bw1));

    CHECK_THROWS_AS(compare_methods(weak, uniform_grid(1.0, 2.0, 5)), ConfigError);
}

TEST_CASE("simulate dispatches on the method") {
    const auto fh = build_fourier(DriveMode::Linear, {1.0, 0.01, 1.0});
    const auto grid = uniform_grid(0.0, 100.0, 11);
    for (const auto m : {Method::Floquet, Method::Bw1, Method::Bw2, Method::Ode}) {
        const auto trace = simulate(fh, m, grid);
        CHECK(trace.method == m);
        CHECK(trace.size() == grid.size());
        CHECK(trace.probabilities.front() == doctest::Approx(0.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(simulate(fh, Method::Bw1, uniform_grid(-1.0, 1.0, 3)), ConfigError);
}

TEST_CASE("uniform grids") {
    const auto g = uniform_grid(0.0, 1.0, 5);
    CHECK(g.size() == 5);
    CHECK(g[2] == 0.5);
    CHECK(g.back() == 1.0);
    CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(uniform_grid(1.0, 1.0, 3), ConfigError);
}
