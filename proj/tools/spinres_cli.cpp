// spinres: two-level spin resonance under periodic drives.
//
//   spinres simulate --mode h1 --b 0.01 --omega 1 --method floquet
//   spinres scan     --mode h1 --b 0.05 --method floquet --response gap
//   spinres shift    --b 0.05
//   spinres compare  --mode h2 --b 0.01 --omega 1.01
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinres/errors.hpp"
#include "spinres/report.hpp"
#include "spinres/scan.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string mode = "h1";
    double omega0 = 1.0;
    double b = 0.01;
    std::optional<double> omega;
    std::optional<double> omega_min;
    std::optional<double> omega_max;
    int omega_count = 41;
    std::optional<std::string> method;
    std::optional<std::string> response;
    std::optional<double> tmax;
    std::size_t points = 1001;
    int steps_per_period = 2048;
    std::string nmax = "auto";
    bool strict_paper_formula = false;
    std::string out;
    std::string format = "csv";
    unsigned threads = 0;
};

spinres::EngineOptions engine_options(const Options& o) {
    spinres::EngineOptions e;
    e.integrator.steps_per_drive_period = o.steps_per_period;
    if (o.nmax != "auto") {
        try {
            std::size_t used = 0;
            e.n_max = std::stoi(o.nmax, &used);
            if (used != o.nmax.size()) throw std::invalid_argument(o.nmax);
        } catch (const std::exception&) {
            throw spinres::ConfigError("--nmax expects 'auto' or an integer, got '" + o.nmax + "'");
        }
        if (e.n_max < spinres::kMinNmax) throw spinres::ConfigError("--nmax must be >= 2");
    }
    e.convention = o.strict_paper_formula ? spinres::SineConvention::StrictPaper : spinres::SineConvention::HalfAngle;
    e.threads = o.threads;
    return e;
}

double drive_frequency(const Options& o) { return o.omega.value_or(o.omega0); }

// Default time span: two generalized Rabi periods.
double default_tmax(const Options& o) {
    const double rabi = std::hypot(2.0 * o.b, drive_frequency(o) - o.omega0);
    if (rabi == 0.0) return 100.0 * 2.0 * std::numbers::pi / drive_frequency(o);
    return 4.0 * std::numbers::pi / rabi;
}

nlohmann::json config_echo(const Options& o, const std::string& command) {
    nlohmann::json c = {
        {"command", command},
        {"mode", o.mode},
        {"omega0", o.omega0},
        {"b", o.b},
        {"steps_per_period", o.steps_per_period},
        {"nmax", o.nmax},
        {"strict_paper_formula", o.strict_paper_formula},
    };
    if (o.method) c["method"] = *o.method;
    if (o.response) c["response"] = *o.response;
    if (command == "simulate" || command == "compare") {
        c["omega"] = drive_frequency(o);
        c["tmax"] = o.tmax.value_or(default_tmax(o));
        c["points"] = o.points;
    } else {
        c["omega_min"] = o.omega_min.value_or(o.omega0 - 5.0 * o.b);
        c["omega_max"] = o.omega_max.value_or(o.omega0 + 5.0 * o.b);
        c["omega_count"] = o.omega_count;
    }
    return c;
}

void emit(const Options& o, const std::string& csv, const nlohmann::json& json) {
    if (o.format != "csv" && o.format != "json") throw spinres::ConfigError("--format must be csv or json");
    const std::string text = o.format == "csv" ? csv : json.dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw spinres::ConfigError("cannot open output file '" + o.out + "'");
    file << text;
}

spinres::ScanConfig scan_config(const Options& o, spinres::Method default_method, bool gap_for_floquet) {
    spinres::ScanConfig cfg;
    cfg.mode = spinres::parse_drive_mode(o.mode);
    cfg.omega0 = o.omega0;
    cfg.b = o.b;
    cfg.grid = spinres::OmegaGrid::linear(o.omega_min.value_or(o.omega0 - 5.0 * o.b),
                                          o.omega_max.value_or(o.omega0 + 5.0 * o.b), o.omega_count);
    cfg.method = o.method ? spinres::parse_method(*o.method) : default_method;
    if (o.response) {
        cfg.response = spinres::parse_response(*o.response);
    } else {
        cfg.response = gap_for_floquet && cfg.method == spinres::Method::Floquet ? spinres::Response::MinGap
                                                                                 : spinres::Response::PeakAmplitude;
    }
    cfg.engine = engine_options(o);
    return cfg;
}

int run_simulate(const Options& o) {
    const auto mode = spinres::parse_drive_mode(o.mode);
    const auto method = spinres::parse_method(o.method.value_or("floquet"));
    const auto fh = spinres::build_fourier(mode, {o.omega0, o.b, drive_frequency(o)});
    const auto grid = spinres::uniform_grid(0.0, o.tmax.value_or(default_tmax(o)), o.points);
    const auto trace = spinres::simulate(fh, method, grid, engine_options(o));
    emit(o, spinres::trace_csv(trace), spinres::trace_json(trace, config_echo(o, "simulate")));
    return 0;
}

int run_scan(const Options& o) {
    const auto cfg = scan_config(o, spinres::Method::Bw1, false);
    const auto result = spinres::run_scan(cfg);
    if (result.has_peak()) {
        std::cerr << "located resonance " << spinres::format_double(*result.located_resonance) << " (shift "
                  << spinres::format_double(result.shift) << ")\n";
    } else {
        std::cerr << "no peak: response stays below " << spinres::kNoPeakThreshold << "\n";
    }
    emit(o, spinres::scan_csv(result), spinres::scan_json(result, config_echo(o, "scan")));
    return 0;
}

int run_shift(const Options& o) {
    const auto cfg = scan_config(o, spinres::Method::Floquet, true);
    const auto report = spinres::extract_shift(cfg);
    std::cerr << "numeric shift " << spinres::format_double(report.numeric_shift) << ", closed form "
              << spinres::format_double(report.formula_exact - o.omega0) << " (relative discrepancy "
              << spinres::format_double(report.relative_discrepancy) << ")\n";
    emit(o, spinres::shift_csv(report), spinres::shift_json(report, config_echo(o, "shift")));
    return 0;
}

int run_compare(const Options& o) {
    spinres::CompareConfig cfg;
    cfg.mode = spinres::parse_drive_mode(o.mode);
    cfg.params = {o.omega0, o.b, drive_frequency(o)};
    cfg.engine = engine_options(o);
    const auto grid = spinres::uniform_grid(0.0, o.tmax.value_or(default_tmax(o)), o.points);
    const auto cmp = spinres::compare_methods(cfg, grid);
    emit(o, spinres::comparison_csv(cmp), spinres::comparison_json(cmp, config_echo(o, "compare")));
    return 0;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--mode", o.mode, "Drive mode")->check(CLI::IsMember({"h1", "h2", "h3", "h4"}));
    cmd->add_option("--omega0", o.omega0, "Intrinsic resonance frequency");
    cmd->add_option("--b", o.b, "Spin-field coupling strength");
    cmd->add_option("--method", o.method, "floquet | bw1 | bw2 | ode")
        ->check(CLI::IsMember({"floquet", "bw1", "bw2", "ode"}));
    cmd->add_option("--steps-per-period", o.steps_per_period, "RK4 steps per drive period (>= 256)");
    cmd->add_option("--nmax", o.nmax, "Floquet truncation half-width, or 'auto'");
    cmd->add_flag("--strict-paper-formula", o.strict_paper_formula,
                  "Second-order closed form with sin^2(Omega t) instead of sin^2(Omega t / 2)");
    cmd->add_option("--out", o.out, "Output path (default: stdout)");
    cmd->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", o.threads, "Sweep worker threads (0 = all cores)");
}

void add_time(CLI::App* cmd, Options& o) {
    cmd->add_option("--omega", o.omega, "Drive frequency (default: omega0)");
    cmd->add_option("--tmax", o.tmax, "End of the time grid (default: two Rabi periods)");
    cmd->add_option("--points", o.points, "Number of time samples")->check(CLI::Range(2, 10000000));
}

void add_sweep(CLI::App* cmd, Options& o) {
    cmd->add_option("--omega-min", o.omega_min, "Sweep start (default: omega0 - 5b)");
    cmd->add_option("--omega-max", o.omega_max, "Sweep end (default: omega0 + 5b)");
    cmd->add_option("--omega-count", o.omega_count, "Sweep points");
    cmd->add_option("--response", o.response, "amplitude | gap")->check(CLI::IsMember({"amplitude", "gap"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-level spin resonance: Floquet, Brillouin-Wigner and direct integration"};
    app.require_subcommand(1);
    Options o;

    auto* simulate = app.add_subcommand("simulate", "Transition probability trace P(t)");
    add_common(simulate, o);
    add_time(simulate, o);

    auto* scan = app.add_subcommand("scan", "Response versus drive frequency and the located resonance");
    add_common(scan, o);
    add_sweep(scan, o);

    auto* shift = app.add_subcommand("shift", "Bloch-Siegert shift of the linear drive");
    add_common(shift, o);
    add_sweep(shift, o);

    auto* compare = app.add_subcommand("compare", "Pairwise max deviation between the four methods");
    add_common(compare, o);
    add_time(compare, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*simulate) return run_simulate(o);
        if (*scan) return run_scan(o);
        if (*shift) return run_shift(o);
        if (*compare) return run_compare(o);
    } catch (const spinres::ConfigError& e) {
        std::cerr << "spinres: configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const spinres::NumericalError& e) {
        std::cerr << "spinres: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitConfig;
}
