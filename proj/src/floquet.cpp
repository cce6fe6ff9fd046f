#include "spinres/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <tuple>

#include "spinres/errors.hpp"

namespace spinres {

std::size_t flat_index(FloquetIndex idx, int n_max) {
    if (idx.n < -n_max || idx.n > n_max) {
        throw ConfigError("photon index " + std::to_string(idx.n) + " outside truncation +/-" +
                          std::to_string(n_max));
    }
    return 2 * static_cast<std::size_t>(idx.n + n_max) + static_cast<std::size_t>(index_of(idx.spin));
}

FloquetIndex unflatten(std::size_t row, int n_max) {
    if (row >= floquet_dim(n_max)) throw ConfigError("Floquet row out of range");
    return {row % 2 == 0 ? Spin::Alpha : Spin::Beta, static_cast<int>(row / 2) - n_max};
}

FloquetMatrix::FloquetMatrix(const FourierHamiltonian& fh, int n_max) : n_max_(n_max), source_(fh) {
    if (n_max < kMinNmax || n_max > kMaxNmax) {
        throw ConfigError("n_max must lie in [" + std::to_string(kMinNmax) + ", " +
                          std::to_string(kMaxNmax) + "], got " + std::to_string(n_max));
    }
    const auto d = static_cast<Eigen::Index>(floquet_dim(n_max));
    const double w = fh.params.omega;
    data_ = Eigen::MatrixXcd::Zero(d, d);
    for (int n = -n_max; n <= n_max; ++n) {
        const auto r = static_cast<Eigen::Index>(flat_index({Spin::Alpha, n}, n_max));
        data_.block<2, 2>(r, r) = fh.h0;
        data_(r, r) = fh.h0(0, 0).real() + n * w;
        data_(r + 1, r + 1) = fh.h0(1, 1).real() + n * w;
        data_(r + 1, r) = std::conj(data_(r, r + 1));
        if (n > -n_max) {
            // block(n, n-1) = H^{1} and its mirror block(n-1, n) = H^{-1}
            data_.block<2, 2>(r, r - 2) = fh.h_plus;
            data_.block<2, 2>(r - 2, r) = fh.h_plus.adjoint();
        }
    }
}

Complex FloquetMatrix::at(FloquetIndex row, FloquetIndex col) const {
    return data_(static_cast<Eigen::Index>(flat_index(row, n_max_)),
                 static_cast<Eigen::Index>(flat_index(col, n_max_)));
}

Eigen::MatrixXcd FloquetMatrix::unperturbed() const {
    Eigen::MatrixXcd h0 = Eigen::MatrixXcd::Zero(data_.rows(), data_.cols());
    h0.diagonal() = data_.diagonal();
    return h0;
}

Eigen::MatrixXcd FloquetMatrix::coupling() const { return data_ - unperturbed(); }

FloquetMatrix assemble(const FourierHamiltonian& fh, int n_max) { return FloquetMatrix(fh, n_max); }

std::size_t QuasiEnergySpectrum::column_of(FloquetIndex label) const {
    for (std::size_t c = 0; c < labels.size(); ++c) {
        if (labels[c] == label) return c;
    }
    throw ConfigError("no eigenstate labeled (" + std::string(label.spin == Spin::Alpha ? "alpha" : "beta") +
                      ", " + std::to_string(label.n) + ")");
}

QuasiEnergySpectrum diagonalize(const FloquetMatrix& fm) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(fm.data(), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigensolver did not converge (dim " + std::to_string(fm.dim()) + ")");
    }
    QuasiEnergySpectrum spec;
    spec.eigenvalues = solver.eigenvalues();
    spec.eigenvectors = solver.eigenvectors();
    if (!spec.eigenvalues.allFinite() || !spec.eigenvectors.allFinite()) {
        throw NumericalError("Hermitian eigensolver produced non-finite output");
    }
    spec.n_max = fm.n_max();
    spec.source = fm.source();

    const std::size_t d = fm.dim();
    struct Candidate {
        double weight;
        std::size_t row;
        std::size_t col;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(d * d);
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < d; ++r) {
            candidates.push_back({std::norm(spec.eigenvectors(static_cast<Eigen::Index>(r),
                                                              static_cast<Eigen::Index>(c))),
                                  r, c});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(b.weight, a.row, a.col) < std::tie(a.weight, b.row, b.col);
    });
    std::vector<bool> row_used(d, false), col_used(d, false);
    std::vector<std::size_t> label_row(d, 0);
    std::size_t assigned = 0;
    for (const auto& cand : candidates) {
        if (row_used[cand.row] || col_used[cand.col]) continue;
        row_used[cand.row] = col_used[cand.col] = true;
        label_row[cand.col] = cand.row;
        if (++assigned == d) break;
    }
    spec.labels.reserve(d);
    for (std::size_t c = 0; c < d; ++c) spec.labels.push_back(unflatten(label_row[c], spec.n_max));
    return spec;
}

ResonantPair resonant_pair(const QuasiEnergySpectrum& spec) {
    const auto ra = static_cast<Eigen::Index>(flat_index({Spin::Alpha, 0}, spec.n_max));
    const auto rb = static_cast<Eigen::Index>(flat_index({Spin::Beta, 1}, spec.n_max));
    const auto& v = spec.eigenvectors;

    std::size_t best = 0, second = 0;
    double w_best = -1.0, w_second = -1.0;
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        const double w = std::norm(v(ra, c)) + std::norm(v(rb, c));
        if (w > w_best) {
            second = best;
            w_second = w_best;
            best = static_cast<std::size_t>(c);
            w_best = w;
        } else if (w > w_second) {
            second = static_cast<std::size_t>(c);
            w_second = w;
        }
    }
    ResonantPair pair;
    pair.lower_column = std::min(best, second);
    pair.upper_column = std::max(best, second);
    pair.lower = spec.eigenvalues(static_cast<Eigen::Index>(pair.lower_column));
    pair.upper = spec.eigenvalues(static_cast<Eigen::Index>(pair.upper_column));
    const auto lc = static_cast<Eigen::Index>(pair.lower_column);
    const double pa = std::norm(v(ra, lc));
    const double pb = std::norm(v(rb, lc));
    pair.mixing = (pa + pb) > 0.0 ? 4.0 * pa * pb / ((pa + pb) * (pa + pb)) : 0.0;
    return pair;
}

ShirleyPropagator::ShirleyPropagator(const QuasiEnergySpectrum& spec, Spin from, Spin to)
    : n_max_(spec.n_max), omega_(spec.omega()), lambda_(spec.eigenvalues) {
    const auto sectors = 2 * n_max_ + 1;
    const auto d = static_cast<Eigen::Index>(spec.dim());
    const auto r0 = static_cast<Eigen::Index>(flat_index({from, 0}, n_max_));
    weights_.resize(sectors, d);
    for (int s = 0; s < sectors; ++s) {
        const auto r = static_cast<Eigen::Index>(flat_index({to, s - n_max_}, n_max_));
        weights_.row(s) = spec.eigenvectors.row(r).cwiseProduct(spec.eigenvectors.row(r0).conjugate());
    }
}

Complex ShirleyPropagator::amplitude(double t, double t0) const {
    const double tau = t - t0;
    Eigen::VectorXcd evolve(lambda_.size());
    for (Eigen::Index k = 0; k < lambda_.size(); ++k) evolve(k) = std::polar(1.0, -lambda_(k) * tau);
    const Eigen::VectorXcd per_sector = weights_ * evolve;
    Complex sum = 0.0;
    for (Eigen::Index s = 0; s < per_sector.size(); ++s) {
        const int n = static_cast<int>(s) - n_max_;
        sum += std::polar(1.0, n * omega_ * t) * per_sector(s);
    }
    return sum;
}

Complex ShirleyPropagator::sector_amplitude(int n_final, double t, double t0) const {
    if (n_final < -n_max_ || n_final > n_max_) throw ConfigError("final sector outside truncation");
    const double tau = t - t0;
    Complex sum = 0.0;
    const auto s = static_cast<Eigen::Index>(n_final + n_max_);
    for (Eigen::Index k = 0; k < lambda_.size(); ++k) sum += weights_(s, k) * std::polar(1.0, -lambda_(k) * tau);
    return sum * std::polar(1.0, n_final * omega_ * t);
}

Complex evolution_amplitude(const QuasiEnergySpectrum& spec, double t, double t0) {
    return ShirleyPropagator(spec).amplitude(t, t0);
}

Complex sector_amplitude(const QuasiEnergySpectrum& spec, int n_final, double t, double t0) {
    return ShirleyPropagator(spec).sector_amplitude(n_final, t, t0);
}

ProbabilityTrace transition_probability_trace(const QuasiEnergySpectrum& spec,
                                              std::span<const double> t_grid, double t0) {
    check_time_grid(t_grid);
    const ShirleyPropagator prop(spec);
    ProbabilityTrace trace;
    trace.method = Method::Floquet;
    trace.params = spec.source.params;
    trace.mode = spec.source.mode;
    trace.times.assign(t_grid.begin(), t_grid.end());
    trace.probabilities.reserve(t_grid.size());
    for (double t : t_grid) trace.probabilities.push_back(clamp_probability(std::norm(prop.amplitude(t, t0))));
    return trace;
}

namespace {

// Resonant pair of one truncation plus the moduli of its two eigenvectors,
// stored per (spin, n) so different truncations can be compared.
struct PairProfile {
    ResonantPair pair;
    int n_max = 0;
    Eigen::MatrixXd moduli;  // rows: flat index at this n_max; cols: lower, upper
};

PairProfile pair_profile(const FourierHamiltonian& fh, int n_max) {
    const auto spec = diagonalize(assemble(fh, n_max));
    PairProfile out{resonant_pair(spec), n_max, Eigen::MatrixXd(spec.dim(), 2)};
    out.moduli.col(0) = spec.eigenvectors.col(static_cast<Eigen::Index>(out.pair.lower_column)).cwiseAbs();
    out.moduli.col(1) = spec.eigenvectors.col(static_cast<Eigen::Index>(out.pair.upper_column)).cwiseAbs();
    return out;
}

double profile_change(const PairProfile& a, const PairProfile& b) {
    double worst = std::max(std::abs(b.pair.lower - a.pair.lower), std::abs(b.pair.upper - a.pair.upper));
    for (std::size_t row = 0; row < floquet_dim(b.n_max); ++row) {
        const FloquetIndex idx = unflatten(row, b.n_max);
        const bool shared = std::abs(idx.n) <= a.n_max;
        for (Eigen::Index c = 0; c < 2; ++c) {
            const double before =
                shared ? a.moduli(static_cast<Eigen::Index>(flat_index(idx, a.n_max)), c) : 0.0;
            worst = std::max(worst, std::abs(b.moduli(static_cast<Eigen::Index>(row), c) - before));
        }
    }
    return worst;
}

}  // namespace

int auto_truncate(const FourierHamiltonian& fh, double tol) {
    if (!(tol > 0.0)) throw ConfigError("truncation tolerance must be positive");
    std::vector<std::optional<PairProfile>> cache(kMaxNmax + 1);
    auto profile_at = [&](int n_max) -> const PairProfile& {
        auto& slot = cache[static_cast<std::size_t>(n_max)];
        if (!slot) slot = pair_profile(fh, n_max);
        return *slot;
    };
    for (int n_max = kMinNmax; n_max + 2 <= kMaxNmax; ++n_max) {
        if (profile_change(profile_at(n_max), profile_at(n_max + 2)) < tol) return n_max;
    }
    throw NumericalError("Floquet truncation did not converge to " + std::to_string(tol) + " by n_max = " +
                         std::to_string(kMaxNmax));
}

}  // namespace spinres
