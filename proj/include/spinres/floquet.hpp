#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinres/drives.hpp"
#include "spinres/trace.hpp"

namespace spinres {

inline constexpr int kMinNmax = 2;
inline constexpr int kMaxNmax = 64;
inline constexpr double kDefaultTruncationTol = 1e-10;

/// Floquet state |spin, n>: spin dressed with photon index n.
struct FloquetIndex {
    Spin spin = Spin::Alpha;
    int n = 0;

    friend bool operator==(const FloquetIndex&, const FloquetIndex&) = default;
};

/// row = 2 (n + n_max) + (0 for alpha, 1 for beta).
std::size_t flat_index(FloquetIndex idx, int n_max);
FloquetIndex unflatten(std::size_t row, int n_max);
constexpr std::size_t floquet_dim(int n_max) { return 2 * (2 * static_cast<std::size_t>(n_max) + 1); }

/// Truncated Floquet matrix over photon sectors n in [-n_max, n_max].
/// Diagonal blocks H0 + n w I, block(n, n-1) = H^{1}, block(n, n+1) = H^{-1}.
class FloquetMatrix {
public:
    FloquetMatrix(const FourierHamiltonian& fh, int n_max);

    int n_max() const { return n_max_; }
    std::size_t dim() const { return static_cast<std::size_t>(data_.rows()); }
    const Eigen::MatrixXcd& data() const { return data_; }
    const FourierHamiltonian& source() const { return source_; }

    Complex at(FloquetIndex row, FloquetIndex col) const;

    /// Unperturbed part H_0 (block diagonal) and coupling V, H = H_0 + V.
    Eigen::MatrixXcd unperturbed() const;
    Eigen::MatrixXcd coupling() const;

private:
    int n_max_;
    FourierHamiltonian source_;
    Eigen::MatrixXcd data_;
};

/// Throws ConfigError for n_max outside [kMinNmax, kMaxNmax].
FloquetMatrix assemble(const FourierHamiltonian& fh, int n_max);

struct QuasiEnergySpectrum {
    Eigen::VectorXd eigenvalues;    // ascending
    Eigen::MatrixXcd eigenvectors;  // columns, orthonormal
    // labels[col]: the unperturbed Floquet state the column overlaps most.
    std::vector<FloquetIndex> labels;
    int n_max = 0;
    FourierHamiltonian source;

    std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
    std::size_t column_of(FloquetIndex label) const;  // throws if absent
    double eigenvalue_of(FloquetIndex label) const { return eigenvalues(column_of(label)); }
    double omega() const { return source.params.omega; }
};

/// Dense Hermitian diagonalization plus labeling. Labels are a one-to-one
/// assignment made greedily by decreasing overlap |<sigma,n|v>|^2; ties go to
/// the lower flattened index.
QuasiEnergySpectrum diagonalize(const FloquetMatrix& fm);

/// The two eigenstates carrying the most weight on {|alpha,0>, |beta,1>}.
struct ResonantPair {
    std::size_t lower_column = 0;
    std::size_t upper_column = 0;
    double lower = 0.0;
    double upper = 0.0;
    // 4 |<alpha,0|v>|^2 |<beta,1|v>|^2 / (weight on the pair)^2, taken from
    // the lower state: 1 at full mixing, 0 with no mixing.
    double mixing = 0.0;

    double gap() const { return upper - lower; }
};

ResonantPair resonant_pair(const QuasiEnergySpectrum& spec);

/// Evaluates the time-evolution amplitude from a diagonalized Floquet matrix:
///
///   U_{to,from}(t; t0) = sum_n e^{i n w t} sum_k <to,n|k> e^{-i l_k (t-t0)} <k|from,0>
///
/// The n = 1 term alone is the familiar two-sector expression for the
/// alpha -> beta amplitude; the remaining sectors carry the counter-rotating
/// micromotion and are needed for agreement with direct integration.
class ShirleyPropagator {
public:
    explicit ShirleyPropagator(const QuasiEnergySpectrum& spec, Spin from = Spin::Alpha,
                               Spin to = Spin::Beta);

    Complex amplitude(double t, double t0) const;
    /// Single final-sector contribution <to, n_final| ... |from, 0> e^{i n_final w t}.
    Complex sector_amplitude(int n_final, double t, double t0) const;

private:
    int n_max_;
    double omega_;
    Eigen::VectorXd lambda_;
    // weights_(s, k) = <to, n_s|k><k|from, 0>, n_s = s - n_max
    Eigen::MatrixXcd weights_;
};

/// Full alpha -> beta amplitude (all final sectors). |U| <= 1 on converged truncations.
Complex evolution_amplitude(const QuasiEnergySpectrum& spec, double t, double t0);

/// The alpha -> beta amplitude restricted to final sector n_final.
/// n_final = 1 reproduces the two-sector textbook form literally.
Complex sector_amplitude(const QuasiEnergySpectrum& spec, int n_final, double t, double t0);

/// |evolution_amplitude|^2 over a strictly increasing grid; method = floquet.
ProbabilityTrace transition_probability_trace(const QuasiEnergySpectrum& spec,
                                              std::span<const double> t_grid, double t0);

/// Smallest n_max in [2, 64] for which the resonant pair moves by less than
/// tol when n_max -> n_max + 2: both quasi-energies and the moduli of every
/// component of the two eigenvectors. NumericalError if none does.
int auto_truncate(const FourierHamiltonian& fh, double tol = kDefaultTruncationTol);

}  // namespace spinres
