// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "scarkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "scarkit/errors.hpp"

namespace scarkit {

double fold(double energy, double omega) noexcept {
    double eps = energy - omega * std::round(energy / omega);
    const double half = 0.5 * omega;
    if (eps >= half) eps -= omega;
    if (eps < -half) eps += omega;
    return eps;
}

template <typename Scalar>
Spectrum<Scalar>::Spectrum(std::shared_ptr<const SectorBasis> basis, double omega, Eigen::VectorXd energies,
                           Matrix vectors, Eigen::VectorXcd row_phase)
    : basis_(std::move(basis)), omega_(omega) {
    const Eigen::Index n = energies.size();
    if (vectors.rows() != n || vectors.cols() != n || row_phase.size() != n)
        throw DomainError("spectrum: inconsistent eigensystem dimensions");

    Eigen::VectorXd folded(n);
    for (Eigen::Index i = 0; i < n; ++i) folded(i) = fold(energies(i), omega);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (folded(a) != folded(b)) return folded(a) < folded(b);
        return energies(a) < energies(b);
    });

    bool identity = true;
    for (Eigen::Index i = 0; i < n; ++i) identity = identity && order[static_cast<std::size_t>(i)] == i;

    energies_.resize(n);
    quasienergies_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        energies_(i) = energies(order[static_cast<std::size_t>(i)]);
        quasienergies_(i) = folded(order[static_cast<std::size_t>(i)]);
    }
    if (identity) {
        vectors_ = std::move(vectors);
    } else {
        // Permute columns in place to avoid a second D x D buffer at large D.
        std::vector<bool> done(static_cast<std::size_t>(n), false);
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tmp;
        for (Eigen::Index start = 0; start < n; ++start) {
            if (done[static_cast<std::size_t>(start)]) continue;
            tmp = vectors.col(start);
            Eigen::Index cur = start;
            while (true) {
                done[static_cast<std::size_t>(cur)] = true;
                const Eigen::Index src = order[static_cast<std::size_t>(cur)];
                if (src == start) {
                    vectors.col(cur) = tmp;
                    break;
                }
                vectors.col(cur) = vectors.col(src);
                cur = src;
            }
        }
        vectors_ = std::move(vectors);
    }
    row_phase_ = std::move(row_phase);

    // Largest-magnitude component real and positive; first index wins ties.
    column_phase_.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        Eigen::Index at = 0;
        vectors_.col(a).cwiseAbs2().maxCoeff(&at);
        const std::complex<double> c = row_phase_(at) * std::complex<double>(vectors_(at, a));
        column_phase_(a) = std::abs(c) > 0 ? std::conj(c) / std::abs(c) : std::complex<double>(1.0);
    }

    const double tol = default_zero_tolerance();
    for (Eigen::Index a = 0; a < n; ++a)
        if (std::abs(quasienergies_(a)) <= tol) zero_indices_.push_back(a);
}

template <typename Scalar>
double Spectrum<Scalar>::period() const noexcept {
    return 2.0 * std::numbers::pi / omega_;
}

template <typename Scalar>
double Spectrum<Scalar>::default_zero_tolerance() const noexcept {
    return quasienergies_.size() == 0 ? 0.0 : 1e-9 * quasienergies_.cwiseAbs().maxCoeff();
}

template <typename Scalar>
std::complex<double> Spectrum<Scalar>::amplitude(Eigen::Index n, Eigen::Index alpha) const {
    return row_phase_(n) * std::complex<double>(vectors_(n, alpha)) * column_phase_(alpha);
}

template <typename Scalar>
Eigen::VectorXcd Spectrum<Scalar>::eigenvector(Eigen::Index alpha) const {
    return row_phase_.cwiseProduct(vectors_.col(alpha).template cast<std::complex<double>>()) *
           column_phase_(alpha);
}

template <typename Scalar>
Eigen::VectorXcd Spectrum<Scalar>::to_eigenbasis(const Eigen::VectorXcd& psi) const {
    if (psi.size() != dimension()) throw DomainError("state dimension does not match the spectrum basis");
    const Eigen::VectorXcd gauged = row_phase_.conjugate().cwiseProduct(psi);
    Eigen::VectorXcd c;
    if constexpr (std::is_same_v<Scalar, double>) {
        c = vectors_.transpose() * gauged.real() + std::complex<double>(0, 1) * (vectors_.transpose() * gauged.imag());
    } else {
        c = vectors_.adjoint() * gauged;
    }
    return column_phase_.conjugate().cwiseProduct(c);
}

template <typename Scalar>
Eigen::VectorXcd Spectrum<Scalar>::from_eigenbasis(const Eigen::VectorXcd& coefficients) const {
    if (coefficients.size() != dimension()) throw DomainError("coefficient count does not match the spectrum");
    const Eigen::VectorXcd c = column_phase_.cwiseProduct(coefficients);
    Eigen::VectorXcd out;
    if constexpr (std::is_same_v<Scalar, double>) {
        out = vectors_ * c.real() + std::complex<double>(0, 1) * (vectors_ * c.imag());
    } else {
        out = vectors_ * c;
    }
    return row_phase_.cwiseProduct(out);
}

template <typename Scalar>
Eigen::VectorXcd Spectrum<Scalar>::from_eigenbasis_rows(const Eigen::VectorXcd& coefficients,
                                                        const std::vector<Eigen::Index>& rows) const {
    const Eigen::VectorXcd c = column_phase_.cwiseProduct(coefficients);
    Eigen::VectorXcd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Eigen::Index r = rows[i];
        std::complex<double> acc = 0;
        if constexpr (std::is_same_v<Scalar, double>) {
            acc = std::complex<double>(vectors_.row(r).dot(c.real()), vectors_.row(r).dot(c.imag()));
        } else {
            acc = (vectors_.row(r) * c)(0);
        }
        out(static_cast<Eigen::Index>(i)) = row_phase_(r) * acc;
    }
    return out;
}

template <typename Scalar>
double Spectrum<Scalar>::orthonormality_defect() const {
    // Row and column phases are unitary diagonals, so R itself must be orthonormal.
    const Matrix gram = vectors_.adjoint() * vectors_;
    return (gram - Matrix::Identity(dimension(), dimension())).cwiseAbs().maxCoeff();
}

template <typename Scalar>
double Spectrum<Scalar>::reconstruction_error(const HamiltonianMatrix& h) const {
    const Eigen::Index n = dimension();
    Eigen::MatrixXcd v(n, n);
    for (Eigen::Index a = 0; a < n; ++a) v.col(a) = eigenvector(a);
    const Eigen::MatrixXcd dense = h.dense();
    const Eigen::MatrixXcd rebuilt = v * energies_.asDiagonal() * v.adjoint();
    const double norm = dense.norm();
    return norm == 0 ? rebuilt.norm() : (dense - rebuilt).norm() / norm;
}

template class Spectrum<double>;
template class Spectrum<std::complex<double>>;

ComplexSpectrum diagonalize(const HamiltonianMatrix& h, const DiagonalizeOptions& options) {
    const Eigen::Index n = h.dimension();
    if (n > options.dense_threshold)
        throw CapabilityError("dimension " + std::to_string(n) + " exceeds the dense threshold " +
                              std::to_string(options.dense_threshold) + "; use propagator-only dynamics instead");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.dense());
    if (solver.info() != Eigen::Success) throw CapabilityError("Hermitian eigensolver did not converge");
    return {h.basis, h.params.omega, solver.eigenvalues(), solver.eigenvectors(), Eigen::VectorXcd::Ones(n)};
}

RealGaugeSpectrum diagonalize_chiral(const HamiltonianMatrix& h, const DiagonalizeOptions& options) {
    const Eigen::Index n = h.dimension();
    if (n > options.dense_threshold)
        throw CapabilityError("dimension " + std::to_string(n) + " exceeds the dense threshold " +
                              std::to_string(options.dense_threshold));
    const Eigen::VectorXd parity = chiral_diagonal(*h.basis);

    std::vector<Eigen::Index> plus, minus;
    std::vector<Eigen::Index> slot(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        auto& side = parity(i) > 0 ? plus : minus;
        slot[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(side.size());
        side.push_back(i);
    }
    const auto np = static_cast<Eigen::Index>(plus.size());
    const auto nm = static_cast<Eigen::Index>(minus.size());

    bool has_real = false, has_imag = false;
    for (int k = 0; k < h.entries.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(h.entries, k); it; ++it) {
            if (it.value() == Complex(0)) continue;
            if (parity(it.row()) == parity(it.col()))
                throw DomainError("operator couples states of equal chiral parity; not chiral");
            has_real = has_real || it.value().real() != 0.0;
            has_imag = has_imag || it.value().imag() != 0.0;
        }
    }
    if (has_real && has_imag)
        throw DomainError("chiral solver needs a purely real or purely imaginary coupling block");
    const bool imaginary = has_imag;

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(np, nm);
    for (int k = 0; k < h.entries.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(h.entries, k); it; ++it) {
            if (parity(it.row()) < 0) continue;
            const Eigen::Index r = slot[static_cast<std::size_t>(it.row())];
            const Eigen::Index c = slot[static_cast<std::size_t>(it.col())];
            block(r, c) = imaginary ? it.value().imag() : it.value().real();
        }
    }

    // With S = diag(1 on +, -i on -), H = S K S^+ and K = [[0, M], [M^T, 0]] is real.
    Eigen::VectorXcd row_phase(n);
    for (Eigen::Index i = 0; i < n; ++i)
        row_phase(i) = (parity(i) < 0 && imaginary) ? Complex(0, -1) : Complex(1, 0);

    Eigen::VectorXd energies(n);
    Eigen::MatrixXd vectors;
    {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
        block.resize(0, 0);
        const Eigen::VectorXd& sigma = svd.singularValues();
        const Eigen::MatrixXd& u = svd.matrixU();
        const Eigen::MatrixXd& v = svd.matrixV();
        const Eigen::Index paired = std::min(np, nm);
        const double s = std::numbers::sqrt2 / 2.0;

        vectors = Eigen::MatrixXd::Zero(n, n);
        Eigen::Index col = 0;
        for (Eigen::Index i = 0; i < paired; ++i) {
            for (int sign : {+1, -1}) {
                energies(col) = sign * sigma(i);
                for (Eigen::Index p = 0; p < np; ++p) vectors(plus[static_cast<std::size_t>(p)], col) = s * u(p, i);
                for (Eigen::Index m = 0; m < nm; ++m)
                    vectors(minus[static_cast<std::size_t>(m)], col) = sign * s * v(m, i);
                ++col;
            }
        }
        for (Eigen::Index i = paired; i < np; ++i, ++col) {
            energies(col) = 0.0;
            for (Eigen::Index p = 0; p < np; ++p) vectors(plus[static_cast<std::size_t>(p)], col) = u(p, i);
        }
        for (Eigen::Index i = paired; i < nm; ++i, ++col) {
            energies(col) = 0.0;
            for (Eigen::Index m = 0; m < nm; ++m) vectors(minus[static_cast<std::size_t>(m)], col) = v(m, i);
        }
    }
    return {h.basis, h.params.omega, std::move(energies), std::move(vectors), std::move(row_phase)};
}

template <typename Scalar>
ZeroModes zero_modes(const Spectrum<Scalar>& spectrum, double tol) {
    ZeroModes z;
    z.tolerance = tol > 0 ? tol : spectrum.default_zero_tolerance();
    const Eigen::VectorXd& eps = spectrum.quasienergies();
    for (Eigen::Index a = 0; a < eps.size(); ++a) {
        const double e = std::abs(eps(a));
        if (e <= z.tolerance) z.indices.push_back(a);
        if (e >= 0.1 * z.tolerance && e <= 10.0 * z.tolerance && z.tolerance > 0) z.tolerance_sensitive = true;
    }
    return z;
}

template ZeroModes zero_modes(const Spectrum<double>&, double);
template ZeroModes zero_modes(const Spectrum<std::complex<double>>&, double);

GapRatioStats gap_ratio_stats(std::vector<double> levels, double positive_floor) {
    std::erase_if(levels, [&](double e) { return !(e > positive_floor); });
    std::sort(levels.begin(), levels.end());
    std::vector<double> gaps;
    for (std::size_t i = 1; i < levels.size(); ++i) {
        const double d = levels[i] - levels[i - 1];
        if (d >= 1e-12) gaps.push_back(d);
    }
    if (gaps.size() < 2) throw DomainError("gap-ratio statistics need at least 3 distinct positive levels");
    GapRatioStats stats;
    stats.ratios.reserve(gaps.size() - 1);
    for (std::size_t i = 1; i < gaps.size(); ++i)
        stats.ratios.push_back(std::min(gaps[i] / gaps[i - 1], gaps[i - 1] / gaps[i]));
    stats.mean = std::accumulate(stats.ratios.begin(), stats.ratios.end(), 0.0) /
                 static_cast<double>(stats.ratios.size());
    return stats;
}

template <typename Scalar>
GapRatioStats gap_ratio_stats(const Spectrum<Scalar>& spectrum) {
    const Eigen::VectorXd& eps = spectrum.quasienergies();
    return gap_ratio_stats(std::vector<double>(eps.data(), eps.data() + eps.size()),
                           spectrum.default_zero_tolerance());
}

template GapRatioStats gap_ratio_stats(const Spectrum<double>&);
template GapRatioStats gap_ratio_stats(const Spectrum<std::complex<double>>&);

template <typename Scalar>
KernelParityReport kernel_parity_report(const Spectrum<Scalar>& spectrum, double rank_tol) {
    KernelParityReport report;
    const auto& zeros = spectrum.zero_indices();
    report.kernel_size = static_cast<Eigen::Index>(zeros.size());
    if (zeros.empty()) return report;

    const SectorBasis& basis = *spectrum.basis();
    const ChiralSplit split = subspace_dims(basis);
    int smaller = -split.larger_sector;
    if (smaller == 0) {
        // Equal sectors: report the sector carrying less kernel weight.
        double w_plus = 0, w_minus = 0;
        for (Eigen::Index n = 0; n < spectrum.dimension(); ++n) {
            const bool plus = chiral_parity(basis.state(static_cast<std::size_t>(n))) > 0;
            for (Eigen::Index a : zeros) (plus ? w_plus : w_minus) += spectrum.weight(n, a);
        }
        smaller = w_plus <= w_minus ? +1 : -1;
    }

    std::vector<Eigen::Index> rows;
    for (Eigen::Index n = 0; n < spectrum.dimension(); ++n)
        if (chiral_parity(basis.state(static_cast<std::size_t>(n))) == smaller) rows.push_back(n);

    Eigen::MatrixXcd projected(static_cast<Eigen::Index>(rows.size()), report.kernel_size);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < zeros.size(); ++j)
            projected(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                spectrum.amplitude(rows[i], zeros[j]);
    report.total_weight_in_smaller = projected.squaredNorm();
    if (projected.size() > 0) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(projected);
        const Eigen::VectorXd& s = svd.singularValues();
        report.max_singular_in_smaller = s.size() ? s.maxCoeff() : 0.0;
        report.rank_in_smaller = (s.array() > rank_tol).count();
    }
    return report;
}

template KernelParityReport kernel_parity_report(const Spectrum<double>&, double);
template KernelParityReport kernel_parity_report(const Spectrum<std::complex<double>>&, double);

double mirror_symmetry_defect(const Eigen::VectorXd& quasienergies) {
    const Eigen::Index n = quasienergies.size();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, std::abs(quasienergies(i) + quasienergies(n - 1 - i)));
    return worst;
}

}  // namespace scarkit
