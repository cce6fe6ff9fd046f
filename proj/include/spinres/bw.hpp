#pragma once

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "spinres/drives.hpp"
#include "spinres/trace.hpp"

namespace spinres {

// Brillouin-Wigner partitioning of the Floquet problem onto the model space
// span{|alpha,0>, |beta,1>}, which is near-degenerate for w ~ w0.

/// Which sine argument the second-order closed form uses.
///   HalfAngle:   sin^2(Omega t / 2), consistent with the first-order Rabi law.
///   StrictPaper: sin^2(Omega t), the form as originally printed.
enum class SineConvention { HalfAngle, StrictPaper };

/// 2x2 effective Hamiltonian on (|alpha,0>, |beta,1>).
struct EffectiveTwoLevel {
    ComplexMatrix2 matrix = ComplexMatrix2::Zero();
    int order = 1;
    SpinParams params;
    Complex coupling{0.0, 0.0};  // <alpha,0|H|beta,1>
};

struct RabiSolution {
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    double amplitude = 0.0;       // peak transition probability
    double rabi_frequency = 0.0;  // lambda_plus - lambda_minus
    double detuning = 0.0;        // H_22 - H_11; equals w - w0 at first order
    Eigen::Vector2cd state_plus = Eigen::Vector2cd::Zero();
    Eigen::Vector2cd state_minus = Eigen::Vector2cd::Zero();
};

/// Multiple of b beyond which |detuning| is rejected by the BW routines.
inline constexpr double kDetuningLimitFactor = 10.0;

/// Parameter checks shared by the BW routines: valid parameters (b = 0
/// allowed), weak drive, and |w - w0| <= 10 b (up to round-off in w) with a
/// warning beyond b.
void check_near_resonance(const FourierHamiltonian& fh);

/// [[E_alpha, c], [c*, E_beta + w]] with c = coupling_element(fh).
EffectiveTwoLevel effective_h_order1(const FourierHamiltonian& fh);

/// Second-order closed form for the linear drive, with the resolvent energy
/// replaced by the zeroth-order midpoint:
///   [[E_alpha + b^2/(3w/2 + w0/2), b], [b, E_beta + w - b^2/(3w/2 + w0/2)]].
/// Only the linear drive (or a Custom drive whose e^{iwt} block is c sx with
/// real c) is accepted; other drives go through effective_h_general.
EffectiveTwoLevel effective_h_order2(const FourierHamiltonian& fh);

/// (E_alpha + E_beta + w) / 2.
double default_lambda_guess(const FourierHamiltonian& fh);

/// Numeric effective Hamiltonian from the explicit resolvent sum over the
/// complement space of a truncated Floquet matrix:
///   order 1: H_PP
///   order 2: H_PP + V_PQ (lambda - H0_QQ)^{-1} V_QP
/// NumericalError when lambda sits within 1e-12 w0 of a complement energy.
EffectiveTwoLevel effective_h_general(const FourierHamiltonian& fh, int order,
                                      std::optional<double> lambda_guess = std::nullopt, int n_max = 4);

/// Eigen-decomposition of any effective 2x2 Hamiltonian. For zero coupling
/// the amplitude is 0 and lambda_+/- are the bare diagonal entries.
RabiSolution rabi_solution(const EffectiveTwoLevel& eff);
RabiSolution rabi_solution_order1(const FourierHamiltonian& fh);

/// |<beta,1|exp(-i H_eff t)|alpha,0>|^2 = A sin^2(Omega t / 2).
double two_level_probability(const EffectiveTwoLevel& eff, double t);

/// Peak of two_level_probability: 4|c|^2 / (4|c|^2 + D^2).
double amplitude_factor(const EffectiveTwoLevel& eff);

/// 4|c|^2/(4|c|^2 + d^2) sin^2(sqrt(4|c|^2 + d^2) t / 2), d = w - w0.
double probability_order1(const FourierHamiltonian& fh, double t);

/// Second-order transition probability of the linear drive,
///   4b^2/(D^2 + 4b^2) sin^2(k sqrt(D^2 + 4b^2) t),  D = 4b^2/(w0 + 3w) + w0 - w,
/// with k = 1/2 (HalfAngle) or 1 (StrictPaper).
double probability_order2(const FourierHamiltonian& fh, double t,
                          SineConvention convention = SineConvention::HalfAngle);

/// Amplitude factor 4b^2/(D^2 + 4b^2) of the second-order closed form.
double amplitude_factor_order2(const FourierHamiltonian& fh);

struct BlochSiegertResonance {
    double exact = 0.0;   // (2 sqrt(3b^2 + w0^2) + w0) / 3
    double approx = 0.0;  // w0 (1 + (b/w0)^2)
};

/// Shifted resonance frequency of the linear drive; params.omega is ignored.
BlochSiegertResonance bloch_siegert_resonance(const SpinParams& params);

/// Model-space projector P and its complement built state by state over the
/// truncated Floquet basis.
struct ModelSpaceProjectors {
    Eigen::MatrixXd model;
    Eigen::MatrixXd complement;
};

ModelSpaceProjectors model_space_projectors(int n_max);

/// Closed-form BW trace from t = 0: Bw1 uses probability_order1; Bw2 uses
/// probability_order2 for the linear drive and the numeric second-order
/// effective Hamiltonian otherwise.
ProbabilityTrace bw_trace(const FourierHamiltonian& fh, std::span<const double> t_grid, Method method,
                          SineConvention convention = SineConvention::HalfAngle);

}  // namespace spinres
