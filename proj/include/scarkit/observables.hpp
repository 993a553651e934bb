// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file observables.hpp
 * @brief Entropies, kernel projections and the zero-energy scar state.
 *
 * All entropies are in nats with 0 ln 0 = 0.
 */

#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "scarkit/fock_basis.hpp"
#include "scarkit/spectral.hpp"

namespace scarkit {

/// Amplitudes over a sector basis.
struct StateVector {
    std::shared_ptr<const SectorBasis> basis;
    Eigen::VectorXcd amplitudes;

    [[nodiscard]] double norm() const { return amplitudes.norm(); }
    /// Throws DomainError unless | ||psi|| - 1 | <= tol.
    void require_normalized(double tol = 1e-10) const;
};

/// |f> as a StateVector.  Throws DomainError if f is not in the basis.
[[nodiscard]] StateVector basis_state(std::shared_ptr<const SectorBasis> basis, const FockState& f);

/**
 * Bipartition after site `cut`: left = sites 1..cut.  Precomputes the block
 * layout so repeated entropies (one per eigenstate) reuse it.  Each block
 * fixes the left particle number n; its Schmidt values come from the
 * C(cut, n) x C(L-cut, N-n) coefficient matrix.
 */
class EntanglementCut {
public:
    EntanglementCut(std::shared_ptr<const SectorBasis> basis, int cut);

    [[nodiscard]] int cut() const noexcept { return cut_; }
    /// Schmidt probabilities (squared singular values) above 1e-14, all blocks.
    [[nodiscard]] std::vector<double> schmidt_probabilities(const Eigen::VectorXcd& psi) const;
    /// Von Neumann entropy; throws DomainError for an unnormalized state.
    [[nodiscard]] double entropy(const Eigen::VectorXcd& psi) const;

private:
    struct Block {
        Eigen::Index rows = 0;
        Eigen::Index cols = 0;
    };
    std::shared_ptr<const SectorBasis> basis_;
    int cut_ = 0;
    std::vector<Block> blocks_;
    std::vector<int> block_of_;
    std::vector<Eigen::Index> row_of_;
    std::vector<Eigen::Index> col_of_;
};

/// S_EE across `cut`; cut <= 0 selects L/2.
[[nodiscard]] double entanglement_entropy(const StateVector& state, int cut = 0);

/// -sum |psi_n|^2 ln |psi_n|^2.
[[nodiscard]] double shannon_entropy(const Eigen::VectorXcd& psi);
[[nodiscard]] double shannon_entropy(const StateVector& state);

/// Page value L/2 ln 2 - 1/2.
[[nodiscard]] double page_value(int sites);
/// ln(0.48 D), the COE expectation of the Shannon entropy.
[[nodiscard]] double coe_ie_reference(double dimension);

/// Squared norm of the kernel projection of |f>.
template <typename Scalar>
[[nodiscard]] double zero_projection(const Spectrum<Scalar>& spectrum, const FockState& f);

/// P0 |f> / sqrt(P0).  Throws DomainError if P0 <= 1e-12.
template <typename Scalar>
[[nodiscard]] StateVector scar_state(const Spectrum<Scalar>& spectrum, const FockState& f);

struct OverlapRow {
    double quasienergy = 0.0;
    double weight = 0.0;
    Eigen::Index multiplicity = 1;
};

inline constexpr double kDegeneracyWidth = 1e-9;

/// |<psi_alpha|f>|^2 per eigenstate, or per degenerate cluster when `aggregate` is set.
template <typename Scalar>
[[nodiscard]] std::vector<OverlapRow> overlap_table(const Spectrum<Scalar>& spectrum, const FockState& f,
                                                    bool aggregate = false);

/// Entanglement entropy of every eigenstate; cut <= 0 selects L/2.
template <typename Scalar>
[[nodiscard]] Eigen::VectorXd eigenstate_entanglement(const Spectrum<Scalar>& spectrum, int cut = 0);

template <typename Scalar>
[[nodiscard]] Eigen::VectorXd eigenstate_shannon(const Spectrum<Scalar>& spectrum);

/**
 * Median of `values` over the central `fraction` of the non-kernel
 * eigenstates, ranked by quasienergy.
 */
template <typename Scalar>
[[nodiscard]] double central_band_median(const Spectrum<Scalar>& spectrum, const Eigen::VectorXd& values,
                                         double fraction = 0.2);

/// Indices whose value lies more than `mads` median absolute deviations below the median.
[[nodiscard]] std::vector<Eigen::Index> low_outliers(const Eigen::VectorXd& values, double mads = 3.0,
                                                     const std::vector<Eigen::Index>& exclude = {});

[[nodiscard]] double median(std::vector<double> values);

struct ScarSummary {
    double p0 = 0.0;            ///< P_{0,f}
    double overlap = 0.0;       ///< |<f|s0>|^2
    double entanglement = 0.0;  ///< S_EE(s0) at L/2
    double shannon = 0.0;       ///< S_IE(s0)
    double page = 0.0;
    double coe_ie = 0.0;
    StateVector state;
};

template <typename Scalar>
[[nodiscard]] ScarSummary scar_summary(const Spectrum<Scalar>& spectrum, const FockState& f);

}  // namespace scarkit
