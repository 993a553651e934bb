// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectral.hpp
 * @brief Exact diagonalization, Floquet-zone folding and gap-ratio statistics.
 *
 * Spectrum<Scalar> stores eigenvectors as a Scalar matrix R together with a
 * per-basis-state phase and a per-column phase:
 *
 *   psi_alpha(n) = row_phase(n) * R(n, alpha) * column_phase(alpha).
 *
 * The generic Hermitian solver fills R with complex vectors and unit phases.
 * The chiral solver gauges a bipartite, purely imaginary Hamiltonian to a
 * real symmetric one and keeps R real, which halves the memory at L = 16.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "scarkit/fock_basis.hpp"
#include "scarkit/hamiltonian.hpp"

namespace scarkit {

/// E - omega * round(E / omega), mapped into [-omega/2, omega/2).
[[nodiscard]] double fold(double energy, double omega) noexcept;

inline constexpr Eigen::Index kDefaultDenseThreshold = 20000;

struct DiagonalizeOptions {
    Eigen::Index dense_threshold = kDefaultDenseThreshold;
};

template <typename Scalar>
class Spectrum {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Spectrum() = default;
    /// Sorts by folded quasienergy and fixes the phase convention.  `energies` are unfolded.
    Spectrum(std::shared_ptr<const SectorBasis> basis, double omega, Eigen::VectorXd energies, Matrix vectors,
             Eigen::VectorXcd row_phase);

    [[nodiscard]] Eigen::Index dimension() const noexcept { return quasienergies_.size(); }
    [[nodiscard]] const Eigen::VectorXd& quasienergies() const noexcept { return quasienergies_; }
    [[nodiscard]] const Eigen::VectorXd& energies() const noexcept { return energies_; }
    [[nodiscard]] const Matrix& gauge_vectors() const noexcept { return vectors_; }
    [[nodiscard]] const Eigen::VectorXcd& row_phase() const noexcept { return row_phase_; }
    [[nodiscard]] const Eigen::VectorXcd& column_phase() const noexcept { return column_phase_; }
    [[nodiscard]] const std::shared_ptr<const SectorBasis>& basis() const noexcept { return basis_; }
    [[nodiscard]] double omega() const noexcept { return omega_; }
    [[nodiscard]] double period() const noexcept;

    /// psi_alpha(n).
    [[nodiscard]] std::complex<double> amplitude(Eigen::Index n, Eigen::Index alpha) const;
    /// |psi_alpha(n)|^2.
    [[nodiscard]] double weight(Eigen::Index n, Eigen::Index alpha) const { return std::norm(vectors_(n, alpha)); }
    [[nodiscard]] Eigen::VectorXcd eigenvector(Eigen::Index alpha) const;

    /// c_alpha = <psi_alpha | psi>.
    [[nodiscard]] Eigen::VectorXcd to_eigenbasis(const Eigen::VectorXcd& psi) const;
    /// sum_alpha c_alpha |psi_alpha>.
    [[nodiscard]] Eigen::VectorXcd from_eigenbasis(const Eigen::VectorXcd& coefficients) const;
    /// Only the basis rows listed in `rows` of from_eigenbasis().
    [[nodiscard]] Eigen::VectorXcd from_eigenbasis_rows(const Eigen::VectorXcd& coefficients,
                                                        const std::vector<Eigen::Index>& rows) const;

    /// Indices with |eps| below the default kernel tolerance 1e-9 max|eps|.
    [[nodiscard]] const std::vector<Eigen::Index>& zero_indices() const noexcept { return zero_indices_; }
    [[nodiscard]] double default_zero_tolerance() const noexcept;

    /// max |<psi_a|psi_b> - delta_ab|.
    [[nodiscard]] double orthonormality_defect() const;
    /// ||H - V diag(E) V^+||_F / ||H||_F using the unfolded energies.
    [[nodiscard]] double reconstruction_error(const HamiltonianMatrix& h) const;

private:
    std::shared_ptr<const SectorBasis> basis_;
    double omega_ = 1.0;
    Eigen::VectorXd energies_;
    Eigen::VectorXd quasienergies_;
    Matrix vectors_;
    Eigen::VectorXcd row_phase_;
    Eigen::VectorXcd column_phase_;
    std::vector<Eigen::Index> zero_indices_;
};

using ComplexSpectrum = Spectrum<std::complex<double>>;
using RealGaugeSpectrum = Spectrum<double>;

extern template class Spectrum<double>;
extern template class Spectrum<std::complex<double>>;

/// Dense Hermitian eigensolver.  Throws CapabilityError above the threshold.
[[nodiscard]] ComplexSpectrum diagonalize(const HamiltonianMatrix& h, const DiagonalizeOptions& options = {});

/**
 * Eigensystem of a chiral Hamiltonian H = [[0, B], [B^+, 0]] (blocks by
 * chiral parity) whose coupling block is purely real or purely imaginary.
 * Uses an SVD of the real N+ x N- block: singular pairs give the +/-sigma
 * states, the unmatched singular vectors span the kernel, each inside one
 * parity sector.  Throws DomainError if H is not of that form.
 */
[[nodiscard]] RealGaugeSpectrum diagonalize_chiral(const HamiltonianMatrix& h,
                                                   const DiagonalizeOptions& options = {});

struct ZeroModes {
    std::vector<Eigen::Index> indices;
    double tolerance = 0.0;
    /// Some |eps| falls in [0.1 tol, 10 tol], so the count depends on the tolerance.
    bool tolerance_sensitive = false;
};

/// tol <= 0 selects the default 1e-9 max|eps|.
template <typename Scalar>
[[nodiscard]] ZeroModes zero_modes(const Spectrum<Scalar>& spectrum, double tol = 0.0);

inline constexpr double kCoeMeanGapRatio = 0.5307;
inline constexpr double kPoissonMeanGapRatio = 0.38629436111989;  // 2 ln 2 - 1

struct GapRatioStats {
    std::vector<double> ratios;
    double mean = 0.0;
    double coe_reference = kCoeMeanGapRatio;
    double poisson_reference = kPoissonMeanGapRatio;
};

/// r_a = min(d_{a+1}/d_a, d_a/d_{a+1}) over the levels strictly above `positive_floor`.
[[nodiscard]] GapRatioStats gap_ratio_stats(std::vector<double> levels, double positive_floor = 0.0);

/// Uses the positive quasienergies above the default zero-mode tolerance.
template <typename Scalar>
[[nodiscard]] GapRatioStats gap_ratio_stats(const Spectrum<Scalar>& spectrum);

/**
 * Weight of the kernel in each chiral sector: rank of the kernel projected
 * on the smaller sector.  A clean chiral kernel has rank 0 there.
 */
struct KernelParityReport {
    Eigen::Index kernel_size = 0;
    Eigen::Index rank_in_smaller = 0;
    double max_singular_in_smaller = 0.0;
    double total_weight_in_smaller = 0.0;
};

template <typename Scalar>
[[nodiscard]] KernelParityReport kernel_parity_report(const Spectrum<Scalar>& spectrum, double rank_tol = 1e-8);

/// Sorted eps versus the negated, reversed list: max deviation.
[[nodiscard]] double mirror_symmetry_defect(const Eigen::VectorXd& quasienergies);

}  // namespace scarkit
