#include "spinres/bw.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "spinres/diagnostics.hpp"
#include "spinres/errors.hpp"
#include "spinres/floquet.hpp"

namespace spinres {

namespace {

double bare_splitting(const FourierHamiltonian& fh) { return fh.energy(Spin::Alpha) - fh.energy(Spin::Beta); }

// b for drives whose e^{iwt} block is b sx; ConfigError otherwise.
double linear_coupling(const FourierHamiltonian& fh) {
    if (fh.mode == DriveMode::Linear) return fh.params.b;
    if (fh.mode == DriveMode::Custom) {
        const auto& hp = fh.h_plus;
        const double scale = std::max(1e-300, hp.cwiseAbs().maxCoeff());
        const bool sx_shaped = std::abs(hp(0, 0)) <= 1e-14 * scale && std::abs(hp(1, 1)) <= 1e-14 * scale &&
                               std::abs(hp(0, 1) - hp(1, 0)) <= 1e-14 * scale &&
                               std::abs(hp(0, 1).imag()) <= 1e-14 * scale;
        if (sx_shaped) return hp(0, 1).real();
    }
    throw ConfigError("second-order closed form is derived for the linear drive only (got mode " +
                      std::string(to_string(fh.mode)) + "); use effective_h_general");
}

void check_time(double t) {
    if (!std::isfinite(t) || t < 0.0) throw ConfigError("BW closed forms need t >= 0");
}

}  // namespace

void check_near_resonance(const FourierHamiltonian& fh) {
    validate(fh.params, /*allow_zero_coupling=*/true);
    check_weak_drive(fh.params);
    const double b = fh.params.b;
    if (b == 0.0) return;
    const double detuning = fh.params.omega - bare_splitting(fh);
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(fh.params.omega);
    if (std::abs(detuning) > kDetuningLimitFactor * b + slack) {
        std::ostringstream os;
        os << "detuning " << detuning << " is outside the near-resonance window |w - w0| <= "
           << kDetuningLimitFactor << " b = " << kDetuningLimitFactor * b;
        throw ConfigError(os.str());
    }
    if (std::abs(detuning) > b) {
        std::ostringstream os;
        os << "detuning " << detuning << " exceeds b = " << b << "; BW near-degeneracy assumption degrades";
        warn(os.str());
    }
}

EffectiveTwoLevel effective_h_order1(const FourierHamiltonian& fh) {
    check_near_resonance(fh);
    EffectiveTwoLevel eff;
    eff.order = 1;
    eff.params = fh.params;
    eff.coupling = coupling_element(fh);
    eff.matrix << fh.energy(Spin::Alpha), eff.coupling, std::conj(eff.coupling),
        fh.energy(Spin::Beta) + fh.params.omega;
    return eff;
}

EffectiveTwoLevel effective_h_order2(const FourierHamiltonian& fh) {
    const double b = linear_coupling(fh);
    check_near_resonance(fh);
    const double w = fh.params.omega;
    const double shift = b * b / (1.5 * w + 0.5 * bare_splitting(fh));
    EffectiveTwoLevel eff;
    eff.order = 2;
    eff.params = fh.params;
    eff.coupling = b;
    eff.matrix << fh.energy(Spin::Alpha) + shift, b, b, fh.energy(Spin::Beta) + w - shift;
    return eff;
}

double default_lambda_guess(const FourierHamiltonian& fh) {
    return 0.5 * (fh.energy(Spin::Alpha) + fh.energy(Spin::Beta) + fh.params.omega);
}

EffectiveTwoLevel effective_h_general(const FourierHamiltonian& fh, int order, std::optional<double> lambda_guess,
                                      int n_max) {
    if (order != 1 && order != 2) throw ConfigError("effective_h_general supports order 1 or 2");
    validate(fh.params, /*allow_zero_coupling=*/true);
    const double lambda = lambda_guess.value_or(default_lambda_guess(fh));
    if (!std::isfinite(lambda)) throw ConfigError("lambda_guess must be finite");

    const FloquetMatrix fm = assemble(fh, n_max);
    const Eigen::MatrixXcd& h = fm.data();
    const std::array<Eigen::Index, 2> model = {
        static_cast<Eigen::Index>(flat_index({Spin::Alpha, 0}, n_max)),
        static_cast<Eigen::Index>(flat_index({Spin::Beta, 1}, n_max)),
    };

    EffectiveTwoLevel eff;
    eff.order = order;
    eff.params = fh.params;
    eff.coupling = h(model[0], model[1]);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) eff.matrix(i, j) = h(model[i], model[j]);

    if (order == 2) {
        const double singular = 1e-12 * std::abs(bare_splitting(fh));
        for (Eigen::Index q = 0; q < h.rows(); ++q) {
            if (q == model[0] || q == model[1]) continue;
            const double denom = lambda - h(q, q).real();
            const bool coupled = h(model[0], q) != 0.0 || h(model[1], q) != 0.0;
            if (!coupled) continue;
            if (std::abs(denom) < singular) {
                throw NumericalError("resolvent is singular: lambda_guess coincides with an unperturbed "
                                     "complement energy");
            }
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) eff.matrix(i, j) += h(model[i], q) * h(q, model[j]) / denom;
        }
    }
    return eff;
}

RabiSolution rabi_solution(const EffectiveTwoLevel& eff) {
    const double a = eff.matrix(0, 0).real();
    const double d = eff.matrix(1, 1).real();
    const Complex c = eff.matrix(0, 1);
    const double mid = 0.5 * (a + d);
    const double rabi = std::hypot(a - d, 2.0 * std::abs(c));

    RabiSolution sol;
    sol.detuning = d - a;
    sol.rabi_frequency = rabi;
    sol.lambda_plus = mid + 0.5 * rabi;
    sol.lambda_minus = mid - 0.5 * rabi;
    if (c == 0.0) {
        // Uncoupled: the bare states are the eigenstates.
        sol.amplitude = 0.0;
        sol.lambda_plus = std::max(a, d);
        sol.lambda_minus = std::min(a, d);
        sol.state_plus = a >= d ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
        sol.state_minus = a >= d ? Eigen::Vector2cd(0.0, 1.0) : Eigen::Vector2cd(1.0, 0.0);
        return sol;
    }
    sol.amplitude = 4.0 * std::norm(c) / (rabi * rabi);
    // (lambda - d, c*) is an eigenvector for either root.
    sol.state_plus = Eigen::Vector2cd(sol.lambda_plus - d, std::conj(c)).normalized();
    sol.state_minus = Eigen::Vector2cd(sol.lambda_minus - d, std::conj(c)).normalized();
    return sol;
}

RabiSolution rabi_solution_order1(const FourierHamiltonian& fh) { return rabi_solution(effective_h_order1(fh)); }

double two_level_probability(const EffectiveTwoLevel& eff, double t) {
    check_time(t);
    const RabiSolution sol = rabi_solution(eff);
    if (sol.amplitude == 0.0) return 0.0;
    const double s = std::sin(0.5 * sol.rabi_frequency * t);
    return clamp_probability(sol.amplitude * s * s);
}

double amplitude_factor(const EffectiveTwoLevel& eff) { return rabi_solution(eff).amplitude; }

double probability_order1(const FourierHamiltonian& fh, double t) {
    return two_level_probability(effective_h_order1(fh), t);
}

double amplitude_factor_order2(const FourierHamiltonian& fh) {
    const double b = linear_coupling(fh);
    check_near_resonance(fh);
    if (b == 0.0) return 0.0;
    const double w0 = bare_splitting(fh);
    const double w = fh.params.omega;
    const double detune = 4.0 * b * b / (w0 + 3.0 * w) + w0 - w;
    return 4.0 * b * b / (detune * detune + 4.0 * b * b);
}

double probability_order2(const FourierHamiltonian& fh, double t, SineConvention convention) {
    check_time(t);
    const double b = linear_coupling(fh);
    check_near_resonance(fh);
    if (b == 0.0) return 0.0;
    const double w0 = bare_splitting(fh);
    const double w = fh.params.omega;
    const double detune = 4.0 * b * b / (w0 + 3.0 * w) + w0 - w;
    const double rabi = std::sqrt(detune * detune + 4.0 * b * b);
    const double k = convention == SineConvention::HalfAngle ? 0.5 : 1.0;
    const double s = std::sin(k * rabi * t);
    return clamp_probability(4.0 * b * b / (rabi * rabi) * s * s);
}

BlochSiegertResonance bloch_siegert_resonance(const SpinParams& params) {
    if (!(std::isfinite(params.omega0) && params.omega0 > 0.0)) throw ConfigError("omega0 must be positive");
    if (!(std::isfinite(params.b) && params.b >= 0.0)) throw ConfigError("b must be non-negative");
    const double w0 = params.omega0;
    const double b = params.b;
    const double ratio = b / w0;
    return {(2.0 * std::sqrt(3.0 * b * b + w0 * w0) + w0) / 3.0, w0 * (1.0 + ratio * ratio)};
}

ModelSpaceProjectors model_space_projectors(int n_max) {
    if (n_max < kMinNmax) throw ConfigError("model space needs n_max >= 2");
    const auto d = static_cast<Eigen::Index>(floquet_dim(n_max));
    auto ket = [&](FloquetIndex idx) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
        v(static_cast<Eigen::Index>(flat_index(idx, n_max))) = 1.0;
        return v;
    };
    ModelSpaceProjectors out{Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d)};
    for (const FloquetIndex idx : {FloquetIndex{Spin::Alpha, 0}, FloquetIndex{Spin::Beta, 1}}) {
        const Eigen::VectorXd v = ket(idx);
        out.model += v * v.transpose();
    }
    for (int n = -n_max; n <= n_max; ++n) {
        if (n != 0) {
            const Eigen::VectorXd v = ket({Spin::Alpha, n});
            out.complement += v * v.transpose();
        }
        if (n != 1) {
            const Eigen::VectorXd v = ket({Spin::Beta, n});
            out.complement += v * v.transpose();
        }
    }
    return out;
}

ProbabilityTrace bw_trace(const FourierHamiltonian& fh, std::span<const double> t_grid, Method method,
                          SineConvention convention) {
    check_time_grid(t_grid);
    ProbabilityTrace trace;
    trace.method = method;
    trace.params = fh.params;
    trace.mode = fh.mode;
    trace.times.assign(t_grid.begin(), t_grid.end());
    trace.probabilities.reserve(t_grid.size());

    if (method == Method::Bw1) {
        const EffectiveTwoLevel eff = effective_h_order1(fh);
        for (double t : t_grid) trace.probabilities.push_back(two_level_probability(eff, t));
    } else if (method == Method::Bw2) {
        const bool closed_form = fh.mode == DriveMode::Linear;
        std::optional<EffectiveTwoLevel> eff;
        if (!closed_form) {
            check_near_resonance(fh);
            eff = effective_h_general(fh, 2);
        }
        for (double t : t_grid) {
            trace.probabilities.push_back(closed_form ? probability_order2(fh, t, convention)
                                                      : two_level_probability(*eff, t));
        }
    } else {
        throw ConfigError("bw_trace handles bw1 and bw2 only");
    }
    return trace;
}

}  // namespace spinres
