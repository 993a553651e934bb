// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hamiltonian.hpp
 * @brief Operators of the driven tilted chain on a fixed-N sector.
 *
 *   H(t)  = H_on + [1 + u(t)] H_J,   u(t) = -u then +u over each half period
 *   H_on  = U sum n_j n_{j+1} - g sum j n_j
 *   H_J   = J sum (c+_j c_{j+1} + h.c.)
 *
 * Every hop j <-> j+1 is labelled by which of the barriers |g-U|, g, g+U it
 * crosses; the label depends on n_{j-1} and n_{j+2} only, with the virtual
 * sites 0 and L+1 empty.
 */

#pragma once

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "scarkit/fock_basis.hpp"
#include "scarkit/params.hpp"
#include "scarkit/resonance.hpp"

namespace scarkit {

using Complex = std::complex<double>;
using SparseMatrixC = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

enum class BarrierClass : int { GMinusU = 0, G = 1, GPlusU = 2 };

inline constexpr std::array<BarrierClass, 3> kAllBarrierClasses{BarrierClass::GMinusU, BarrierClass::G,
                                                                BarrierClass::GPlusU};

[[nodiscard]] std::string to_string(BarrierClass c);
/// Accepts "g-U", "g", "g+U" (also "gmu", "gpu").
[[nodiscard]] BarrierClass parse_barrier_class(const std::string& text);

struct HopClass {
    BarrierClass barrier = BarrierClass::G;
    /// E(after) - E(before) for the hop that moves the single particle on the bond.
    double signed_delta = 0.0;
};

/// E_n = U (occupied neighbour pairs) - g D.
[[nodiscard]] double onsite_energy(const FockState& state, const ModelParams& p) noexcept;

/// Class of the hop on bond (j, j+1); nullopt if both sites are empty or both occupied.
[[nodiscard]] std::optional<HopClass> classify_hop(const FockState& state, int bond, const ModelParams& p);

/// Class from the projectors alone (no energies needed).
[[nodiscard]] std::optional<BarrierClass> hop_barrier(const FockState& state, int bond) noexcept;

/// Fermionic sign of c+_to c_from in the site-ordered occupation basis.
[[nodiscard]] int hop_sign(const FockState& state, int from, int to) noexcept;

enum class OperatorKind { Onsite, Hop, HalfPeriod1, HalfPeriod2, EffectiveGeneral, EffectiveResonant };

[[nodiscard]] std::string to_string(OperatorKind k);

/// A Hermitian operator on a sector basis, stored sparse (column major).
struct HamiltonianMatrix {
    std::shared_ptr<const SectorBasis> basis;
    SparseMatrixC entries;
    ModelParams params;
    OperatorKind kind = OperatorKind::Hop;

    [[nodiscard]] Eigen::Index dimension() const noexcept { return entries.rows(); }
    [[nodiscard]] Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(entries); }
    /// max |H(a,b) - conj H(b,a)|.
    [[nodiscard]] double hermiticity_defect() const;
};

/// Diagonal H_on.
[[nodiscard]] HamiltonianMatrix build_onsite(std::shared_ptr<const SectorBasis> basis, const ModelParams& p);

/// H_J with amplitude p.J on every legal adjacent hop.
[[nodiscard]] HamiltonianMatrix build_hop_operator(std::shared_ptr<const SectorBasis> basis,
                                                   const ModelParams& p);

/// H_on + (1 - u) H_J for half 1, H_on + (1 + u) H_J for half 2.
[[nodiscard]] HamiltonianMatrix build_half_period(const ModelParams& p, int half,
                                                  std::shared_ptr<const SectorBasis> basis);

/**
 * First-order drive-assisted amplitudes.  The amplitude J_c multiplies
 * P^(c) c+_j c_{j+1}, i.e. the leftward hop, whose barrier is
 * g - U, g and g + U respectively:
 *
 *   J(Delta) = -(i J / (T Delta)) (e^{i Delta T/2} - 1) [(1 - u) + (1 + u) e^{i Delta T/2}]
 *
 * with J(0) = J.
 */
struct FirstOrderAmplitudes {
    Complex j1, j2, j3;

    [[nodiscard]] Complex operator[](BarrierClass c) const noexcept {
        return c == BarrierClass::GMinusU ? j1 : (c == BarrierClass::G ? j2 : j3);
    }
};

/// J(Delta) for one signed barrier.
[[nodiscard]] Complex drive_assisted_amplitude(double delta, const ModelParams& p);

[[nodiscard]] FirstOrderAmplitudes amplitudes_general(const ModelParams& p);

/// (i/T) ln e^{-i H_on T} on the diagonal plus the three projected hop terms.
[[nodiscard]] HamiltonianMatrix build_effective_general(const ModelParams& p,
                                                        std::shared_ptr<const SectorBasis> basis);

/// Real prefactors A_c of the resonant Hamiltonian; the rightward hop carries +i A_c.
struct ResonantAmplitudes {
    double a1 = 0, a2 = 0, a3 = 0;

    [[nodiscard]] double operator[](BarrierClass c) const noexcept {
        return c == BarrierClass::GMinusU ? a1 : (c == BarrierClass::G ? a2 : a3);
    }
};

[[nodiscard]] ResonantAmplitudes resonant_amplitudes(const ModelParams& p, const ResonantFamily& family);

/**
 * Resonant first-order Hamiltonian.  Throws DomainError when p is not on
 * `family`, so a non-chiral operator never comes out of this path.
 */
[[nodiscard]] HamiltonianMatrix build_effective_resonant(const ModelParams& p, const ResonantFamily& family,
                                                         std::shared_ptr<const SectorBasis> basis);
[[nodiscard]] HamiltonianMatrix build_effective_resonant(const ModelParams& p, int k1, int k2, Branch branch,
                                                         std::shared_ptr<const SectorBasis> basis);

/// <to| H_res |from> for two Fock states (zero unless they differ by one adjacent hop).
[[nodiscard]] Complex resonant_element(const FockState& to, const FockState& from, const ResonantAmplitudes& a);

/// Diagonal chiral operator C = (-1)^D on the basis.
[[nodiscard]] Eigen::VectorXd chiral_diagonal(const SectorBasis& basis);

/// max |(C H + H C)_{ab}|.
[[nodiscard]] double chiral_anticommutator_norm(const HamiltonianMatrix& h);

}  // namespace scarkit
