#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

#include "spinres/bw.hpp"
#include "spinres/errors.hpp"
#include "spinres/floquet.hpp"
#include "spinres/oracle.hpp"
#include "spinres/scan.hpp"

namespace py = pybind11;
using namespace spinres;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) throw ConfigError("time grid must be one-dimensional");
    return {a.data(), a.data() + a.size()};
}

int truncation(const FourierHamiltonian& fh, std::optional<int> n_max) {
    return n_max ? *n_max : auto_truncate(fh);
}

}  // namespace

PYBIND11_MODULE(_spinres, m) {
    m.doc() = "Two-level spin resonance: Floquet, Brillouin-Wigner and direct integration";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::enum_<Spin>(m, "Spin").value("ALPHA", Spin::Alpha).value("BETA", Spin::Beta);

    py::enum_<DriveMode>(m, "DriveMode")
        .value("LINEAR", DriveMode::Linear)
        .value("CIRCULAR_PLUS", DriveMode::CircularPlus)
        .value("CIRCULAR_MINUS", DriveMode::CircularMinus)
        .value("LINEAR_TILTED", DriveMode::LinearTilted)
        .value("CUSTOM", DriveMode::Custom)
        .def_static("parse", [](const std::string& s) { return parse_drive_mode(s); })
        .def_property_readonly("label", [](DriveMode d) { return std::string(to_string(d)); });

    py::enum_<Method>(m, "Method")
        .value("FLOQUET", Method::Floquet)
        .value("BW1", Method::Bw1)
        .value("BW2", Method::Bw2)
        .value("ODE", Method::Ode)
        .def_static("parse", [](const std::string& s) { return parse_method(s); })
        .def_property_readonly("label", [](Method x) { return std::string(to_string(x)); });

    py::enum_<Response>(m, "Response")
        .value("PEAK_AMPLITUDE", Response::PeakAmplitude)
        .value("MIN_GAP", Response::MinGap);

    py::enum_<SineConvention>(m, "SineConvention")
        .value("HALF_ANGLE", SineConvention::HalfAngle)
        .value("STRICT_PAPER", SineConvention::StrictPaper);

    py::class_<SpinParams>(m, "SpinParams")
        .def(py::init([](double omega0, double b, double omega) { return SpinParams{omega0, b, omega}; }),
             py::arg("omega0") = 1.0, py::arg("b") = 0.0, py::arg("omega") = 1.0)
        .def_readwrite("omega0", &SpinParams::omega0)
        .def_readwrite("b", &SpinParams::b)
        .def_readwrite("omega", &SpinParams::omega)
        .def_property_readonly("detuning", &SpinParams::detuning)
        .def("__repr__", [](const SpinParams& p) {
            return "SpinParams(omega0=" + py::repr(py::float_(p.omega0)).cast<std::string>() +
                   ", b=" + py::repr(py::float_(p.b)).cast<std::string>() +
                   ", omega=" + py::repr(py::float_(p.omega)).cast<std::string>() + ")";
        });

    py::class_<FourierHamiltonian>(m, "FourierHamiltonian", "H(t) = h0 + h_plus e^{iwt} + h_minus e^{-iwt}")
        .def_readonly("h0", &FourierHamiltonian::h0)
        .def_readonly("h_plus", &FourierHamiltonian::h_plus)
        .def_readonly("h_minus", &FourierHamiltonian::h_minus)
        .def_readonly("params", &FourierHamiltonian::params)
        .def_readonly("mode", &FourierHamiltonian::mode)
        .def("at", &evaluate_time, py::arg("t"), "Lab-frame Hamiltonian at time t");

    m.def("build_fourier", &build_fourier, py::arg("mode"), py::arg("params"));
    m.def("custom_fourier", &custom_fourier, py::arg("h0"), py::arg("h_plus"), py::arg("params"));
    m.def("coupling_element", &coupling_element, py::arg("fh"), "<alpha,0|H|beta,1>; zero means no resonance");

    py::class_<ResonantPair>(m, "ResonantPair")
        .def_readonly("lower", &ResonantPair::lower)
        .def_readonly("upper", &ResonantPair::upper)
        .def_readonly("mixing", &ResonantPair::mixing)
        .def_property_readonly("gap", &ResonantPair::gap);

    py::class_<QuasiEnergySpectrum>(m, "QuasiEnergySpectrum")
        .def_readonly("eigenvalues", &QuasiEnergySpectrum::eigenvalues)
        .def_readonly("eigenvectors", &QuasiEnergySpectrum::eigenvectors)
        .def_readonly("n_max", &QuasiEnergySpectrum::n_max)
        .def_property_readonly("labels",
                               [](const QuasiEnergySpectrum& s) {
                                   std::vector<std::pair<Spin, int>> out;
                                   for (const auto& l : s.labels) out.emplace_back(l.spin, l.n);
                                   return out;
                               })
        .def(
            "eigenvalue_of", [](const QuasiEnergySpectrum& s, Spin spin, int n) { return s.eigenvalue_of({spin, n}); },
            py::arg("spin"), py::arg("n"))
        .def("amplitude", &evolution_amplitude, py::arg("t"), py::arg("t0") = 0.0)
        .def("sector_amplitude", &sector_amplitude, py::arg("n_final"), py::arg("t"), py::arg("t0") = 0.0);

    m.def("auto_truncate", &auto_truncate, py::arg("fh"), py::arg("tol") = kDefaultTruncationTol);
    m.def(
        "floquet_matrix", [](const FourierHamiltonian& fh, int n_max) { return assemble(fh, n_max).data(); },
        py::arg("fh"), py::arg("n_max"));
    m.def(
        "floquet_spectrum",
        [](const FourierHamiltonian& fh, std::optional<int> n_max) {
            return diagonalize(assemble(fh, truncation(fh, n_max)));
        },
        py::arg("fh"), py::arg("n_max") = py::none(), "Diagonalized Floquet matrix; n_max=None truncates automatically");
    m.def("resonant_pair", &resonant_pair, py::arg("spectrum"));

    py::class_<ProbabilityTrace>(m, "ProbabilityTrace")
        .def_property_readonly("t", [](const ProbabilityTrace& tr) { return to_array(tr.times); })
        .def_property_readonly("probability", [](const ProbabilityTrace& tr) { return to_array(tr.probabilities); })
        .def_readonly("method", &ProbabilityTrace::method)
        .def_readonly("params", &ProbabilityTrace::params)
        .def("__len__", &ProbabilityTrace::size)
        .def("max_probability", &ProbabilityTrace::max_probability);

    py::class_<EngineOptions>(m, "EngineOptions")
        .def(py::init<>())
        .def_property(
            "steps_per_period", [](const EngineOptions& e) { return e.integrator.steps_per_drive_period; },
            [](EngineOptions& e, int v) { e.integrator.steps_per_drive_period = v; })
        .def_readwrite("n_max", &EngineOptions::n_max, "0 selects automatic truncation")
        .def_readwrite("truncation_tol", &EngineOptions::truncation_tol)
        .def_readwrite("convention", &EngineOptions::convention)
        .def_readwrite("phase_samples", &EngineOptions::phase_samples)
        .def_readwrite("samples_per_period", &EngineOptions::samples_per_period)
        .def_readwrite("threads", &EngineOptions::threads);

    m.def(
        "simulate",
        [](const FourierHamiltonian& fh, Method method, const py::array_t<double, py::array::c_style | py::array::forcecast>& t,
           const EngineOptions& opts) {
            const auto grid = to_vector(t);
            py::gil_scoped_release release;
            return simulate(fh, method, grid, opts);
        },
        py::arg("fh"), py::arg("method"), py::arg("t"), py::arg("options") = EngineOptions{},
        "P_{alpha->beta}(t) from t[0]");
    m.def(
        "oracle_trace",
        [](const FourierHamiltonian& fh, const py::array_t<double, py::array::c_style | py::array::forcecast>& t,
           int steps_per_period) {
            IntegratorConfig cfg;
            cfg.steps_per_drive_period = steps_per_period;
            const auto grid = to_vector(t);
            py::gil_scoped_release release;
            return oracle_trace(fh, grid, cfg);
        },
        py::arg("fh"), py::arg("t"), py::arg("steps_per_period") = IntegratorConfig{}.steps_per_drive_period);
    m.def(
        "uniform_grid", [](double a, double b, std::size_t n) { return to_array(uniform_grid(a, b, n)); },
        py::arg("t_start"), py::arg("t_end"), py::arg("count"));

    m.def("probability_order1", &probability_order1, py::arg("fh"), py::arg("t"));
    m.def("probability_order2", &probability_order2, py::arg("fh"), py::arg("t"),
          py::arg("convention") = SineConvention::HalfAngle);
    m.def(
        "bloch_siegert_resonance",
        [](double omega0, double b) {
            const auto r = bloch_siegert_resonance({omega0, b, omega0});
            return py::make_tuple(r.exact, r.approx);
        },
        py::arg("omega0"), py::arg("b"), "(exact, approx) shifted resonance of the linear drive");

    py::class_<OmegaGrid>(m, "OmegaGrid")
        .def_static("linear", &OmegaGrid::linear, py::arg("min"), py::arg("max"), py::arg("count"))
        .def_static(
            "explicit",
            [](std::vector<double> values) {
                OmegaGrid g;
                g.explicit_values = std::move(values);
                return g;
            },
            py::arg("values"))
        .def("values", &OmegaGrid::values);

    py::class_<ScanConfig>(m, "ScanConfig")
        .def(py::init<>())
        .def_readwrite("mode", &ScanConfig::mode)
        .def_readwrite("omega0", &ScanConfig::omega0)
        .def_readwrite("b", &ScanConfig::b)
        .def_readwrite("grid", &ScanConfig::grid)
        .def_readwrite("method", &ScanConfig::method)
        .def_readwrite("response", &ScanConfig::response)
        .def_readwrite("engine", &ScanConfig::engine);

    py::class_<ScanResult>(m, "ScanResult")
        .def_property_readonly("omega", [](const ScanResult& r) { return to_array(r.omega_values); })
        .def_property_readonly("values", [](const ScanResult& r) { return to_array(r.response_values); })
        .def_readonly("located_resonance", &ScanResult::located_resonance)
        .def_readonly("shift", &ScanResult::shift)
        .def_readonly("method", &ScanResult::method)
        .def_readonly("response", &ScanResult::response)
        .def_readonly("n_max_used", &ScanResult::n_max_used)
        .def_property_readonly("has_peak", &ScanResult::has_peak);

    py::class_<ShiftReport>(m, "ShiftReport")
        .def_readonly("numeric_shift", &ShiftReport::numeric_shift)
        .def_readonly("formula_exact", &ShiftReport::formula_exact)
        .def_readonly("formula_approx", &ShiftReport::formula_approx)
        .def_readonly("relative_discrepancy", &ShiftReport::relative_discrepancy)
        .def_readonly("scan", &ShiftReport::scan);

    py::class_<MethodComparison>(m, "MethodComparison")
        .def_readonly("max_deviation", &MethodComparison::max_deviation)
        .def_readonly("methods", &MethodComparison::methods)
        .def_readonly("traces", &MethodComparison::traces)
        .def("deviation", &MethodComparison::deviation, py::arg("a"), py::arg("b"));

    m.def(
        "run_scan",
        [](const ScanConfig& cfg) {
            py::gil_scoped_release release;
            return run_scan(cfg);
        },
        py::arg("config"));
    m.def(
        "extract_shift",
        [](const ScanConfig& cfg) {
            py::gil_scoped_release release;
            return extract_shift(cfg);
        },
        py::arg("config"), "Bloch-Siegert shift of the linear drive from a sweep");
    m.def(
        "compare_methods",
        [](DriveMode mode, const SpinParams& params,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& t, const EngineOptions& opts) {
            CompareConfig cfg{mode, params, opts};
            const auto grid = to_vector(t);
            py::gil_scoped_release release;
            return compare_methods(cfg, grid);
        },
        py::arg("mode"), py::arg("params"), py::arg("t"), py::arg("options") = EngineOptions{});
}
