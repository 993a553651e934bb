// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "scarkit/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "scarkit/errors.hpp"
#include "scarkit/spectral.hpp"

namespace scarkit {

void ModelParams::validate() const {
    if (!(J > 0)) throw DomainError("J must be positive");
    if (!(g > 0)) throw DomainError("g must be positive");
    if (!(omega > 0)) throw DomainError("omega must be positive");
    if (!(U >= 0)) throw DomainError("U must be non-negative");
    if (!(u >= 0)) throw DomainError("u must be non-negative");
    if (!std::isfinite(J + U + g + u + omega)) throw DomainError("model parameters must be finite");
}

std::string to_string(BarrierClass c) {
    switch (c) {
        case BarrierClass::GMinusU: return "g-U";
        case BarrierClass::G: return "g";
        case BarrierClass::GPlusU: return "g+U";
    }
    return "?";
}

BarrierClass parse_barrier_class(const std::string& text) {
    if (text == "g-U" || text == "gmu" || text == "|g-U|") return BarrierClass::GMinusU;
    if (text == "g") return BarrierClass::G;
    if (text == "g+U" || text == "gpu") return BarrierClass::GPlusU;
    throw DomainError("unknown barrier class '" + text + "'");
}

std::string to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::Onsite: return "onsite";
        case OperatorKind::Hop: return "hop";
        case OperatorKind::HalfPeriod1: return "half_period_1";
        case OperatorKind::HalfPeriod2: return "half_period_2";
        case OperatorKind::EffectiveGeneral: return "effective_general";
        case OperatorKind::EffectiveResonant: return "effective_resonant";
    }
    return "?";
}

double onsite_energy(const FockState& state, const ModelParams& p) noexcept {
    return p.U * adjacent_pairs(state) - p.g * static_cast<double>(dipole_moment(state));
}

std::optional<BarrierClass> hop_barrier(const FockState& state, int bond) noexcept {
    if (bond < 1 || bond >= state.length()) return std::nullopt;
    if (state.occupation(bond) == state.occupation(bond + 1)) return std::nullopt;
    const int left = state.occupation(bond - 1);
    const int right = state.occupation(bond + 2);
    if (left == right) return BarrierClass::G;
    return right == 1 ? BarrierClass::GMinusU : BarrierClass::GPlusU;
}

std::optional<HopClass> classify_hop(const FockState& state, int bond, const ModelParams& p) {
    if (bond < 1 || bond >= state.length())
        throw DomainError("bond " + std::to_string(bond) + " outside [1, L-1]");
    const auto barrier = hop_barrier(state, bond);
    if (!barrier) return std::nullopt;
    const bool rightward = state.occupation(bond) == 1;
    const FockState after = rightward ? state.moved(bond, bond + 1) : state.moved(bond + 1, bond);
    return HopClass{*barrier, onsite_energy(after, p) - onsite_energy(state, p)};
}

int hop_sign(const FockState& state, int from, int to) noexcept {
    const int lo = std::min(from, to);
    const int hi = std::max(from, to);
    int between = 0;
    for (int s = lo + 1; s < hi; ++s) between += state.occupation(s);
    return between % 2 == 0 ? 1 : -1;
}

double HamiltonianMatrix::hermiticity_defect() const {
    const SparseMatrixC diff = entries - SparseMatrixC(entries.adjoint());
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrixC::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

namespace {

struct RightHop {
    Eigen::Index from;
    Eigen::Index to;
    int bond;
    BarrierClass barrier;
};

// Every rightward hop j -> j+1 in the basis, once per undirected edge.
std::vector<RightHop> right_hops(const SectorBasis& basis) {
    std::vector<RightHop> hops;
    const int L = basis.sites();
    for (std::size_t a = 0; a < basis.size(); ++a) {
        const FockState s = basis.state(a);
        for (int j = 1; j < L; ++j) {
            if (s.occupation(j) != 1 || s.occupation(j + 1) != 0) continue;
            // Adjacent hops cross no occupied site, so the Jordan-Wigner string is trivial.
            if (hop_sign(s, j, j + 1) != 1) throw std::logic_error("unexpected fermionic sign on an adjacent hop");
            const auto b = basis.find(s.moved(j, j + 1));
            if (!b) throw std::logic_error("hop left the particle-number sector");
            hops.push_back({static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(*b), j, *hop_barrier(s, j)});
        }
    }
    return hops;
}

void require_basis(const std::shared_ptr<const SectorBasis>& basis) {
    if (!basis) throw DomainError("operator needs a sector basis");
}

HamiltonianMatrix assemble(std::shared_ptr<const SectorBasis> basis, const ModelParams& p, OperatorKind kind,
                           const std::vector<Triplet>& triplets) {
    const auto n = static_cast<Eigen::Index>(basis->size());
    HamiltonianMatrix h;
    h.basis = std::move(basis);
    h.params = p;
    h.kind = kind;
    h.entries.resize(n, n);
    h.entries.setFromTriplets(triplets.begin(), triplets.end());
    h.entries.makeCompressed();
    if (h.hermiticity_defect() != 0.0) throw std::logic_error("built operator is not Hermitian");
    return h;
}

void add_onsite(const SectorBasis& basis, const ModelParams& p, std::vector<Triplet>& out) {
    for (std::size_t a = 0; a < basis.size(); ++a) {
        const double e = onsite_energy(basis.state(a), p);
        if (e != 0.0) out.emplace_back(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a), Complex(e, 0));
    }
}

void add_hops(const SectorBasis& basis, double amplitude, std::vector<Triplet>& out) {
    if (amplitude == 0.0) return;
    for (const RightHop& h : right_hops(basis)) {
        out.emplace_back(h.to, h.from, Complex(amplitude, 0));
        out.emplace_back(h.from, h.to, Complex(amplitude, 0));
    }
}

}  // namespace

HamiltonianMatrix build_onsite(std::shared_ptr<const SectorBasis> basis, const ModelParams& p) {
    require_basis(basis);
    std::vector<Triplet> t;
    add_onsite(*basis, p, t);
    return assemble(std::move(basis), p, OperatorKind::Onsite, t);
}

HamiltonianMatrix build_hop_operator(std::shared_ptr<const SectorBasis> basis, const ModelParams& p) {
    require_basis(basis);
    std::vector<Triplet> t;
    add_hops(*basis, p.J, t);
    return assemble(std::move(basis), p, OperatorKind::Hop, t);
}

HamiltonianMatrix build_half_period(const ModelParams& p, int half, std::shared_ptr<const SectorBasis> basis) {
    require_basis(basis);
    if (half != 1 && half != 2) throw DomainError("half must be 1 or 2");
    p.validate();
    std::vector<Triplet> t;
    add_onsite(*basis, p, t);
    add_hops(*basis, (half == 1 ? 1.0 - p.u : 1.0 + p.u) * p.J, t);
    return assemble(std::move(basis), p, half == 1 ? OperatorKind::HalfPeriod1 : OperatorKind::HalfPeriod2, t);
}

Complex drive_assisted_amplitude(double delta, const ModelParams& p) {
    if (std::abs(delta) <= 1e-12 * p.g) return {p.J, 0.0};
    const double T = p.period();
    const Complex half = std::polar(1.0, delta * T / 2.0);
    const Complex i(0.0, 1.0);
    return -(i * p.J / (T * delta)) * (half - 1.0) * ((1.0 - p.u) + (1.0 + p.u) * half);
}

FirstOrderAmplitudes amplitudes_general(const ModelParams& p) {
    return {drive_assisted_amplitude(p.g - p.U, p), drive_assisted_amplitude(p.g, p),
            drive_assisted_amplitude(p.g + p.U, p)};
}

HamiltonianMatrix build_effective_general(const ModelParams& p, std::shared_ptr<const SectorBasis> basis) {
    require_basis(basis);
    p.validate();
    const FirstOrderAmplitudes amps = amplitudes_general(p);
    std::vector<Triplet> t;
    for (std::size_t a = 0; a < basis->size(); ++a) {
        const double e = fold(onsite_energy(basis->state(a), p), p.omega);
        if (e != 0.0) t.emplace_back(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a), Complex(e, 0));
    }
    for (const RightHop& h : right_hops(*basis)) {
        const Complex left = amps[h.barrier];  // multiplies c+_j c_{j+1}
        t.emplace_back(h.from, h.to, left);
        t.emplace_back(h.to, h.from, std::conj(left));
    }
    return assemble(std::move(basis), p, OperatorKind::EffectiveGeneral, t);
}

ResonantAmplitudes resonant_amplitudes(const ModelParams& p, const ResonantFamily& family) {
    if (!satisfies_family(p, family))
        throw DomainError("parameters are not on the resonant family (k1=" + std::to_string(family.k1) +
                          ", k2=" + std::to_string(family.k2) + ", branch " + to_string(family.branch) + ")");
    const double a = family.u_over_g();
    const double base = 2.0 * p.u * p.J / (family.g_over_omega * std::numbers::pi);
    return {base / (1.0 - a), base, base / (1.0 + a)};
}

HamiltonianMatrix build_effective_resonant(const ModelParams& p, const ResonantFamily& family,
                                           std::shared_ptr<const SectorBasis> basis) {
    require_basis(basis);
    p.validate();
    const ResonantAmplitudes a = resonant_amplitudes(p, family);
    std::vector<Triplet> t;
    for (const RightHop& h : right_hops(*basis)) {
        const double amp = a[h.barrier];
        if (amp == 0.0) continue;
        t.emplace_back(h.to, h.from, Complex(0, amp));
        t.emplace_back(h.from, h.to, Complex(0, -amp));
    }
    return assemble(std::move(basis), p, OperatorKind::EffectiveResonant, t);
}

HamiltonianMatrix build_effective_resonant(const ModelParams& p, int k1, int k2, Branch branch,
                                           std::shared_ptr<const SectorBasis> basis) {
    return build_effective_resonant(p, resonant_family(k1, k2, branch), std::move(basis));
}

Complex resonant_element(const FockState& to, const FockState& from, const ResonantAmplitudes& a) {
    if (to.length() != from.length()) return {};
    const Word diff = to.bits() ^ from.bits();
    if (std::popcount(diff) != 2) return {};
    const int low = std::countr_zero(diff);
    if (((diff >> low) & 0b11u) != 0b11u) return {};
    const int L = from.length();
    const int j = L - low - 1;  // bond (j, j+1) spans bits low+1 and low
    const auto barrier = hop_barrier(from, j);
    if (!barrier) return {};
    const bool rightward = from.occupation(j) == 1;
    return {0.0, rightward ? a[*barrier] : -a[*barrier]};
}

Eigen::VectorXd chiral_diagonal(const SectorBasis& basis) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t a = 0; a < basis.size(); ++a) c(static_cast<Eigen::Index>(a)) = chiral_parity(basis.state(a));
    return c;
}

double chiral_anticommutator_norm(const HamiltonianMatrix& h) {
    const Eigen::VectorXd c = chiral_diagonal(*h.basis);
    double worst = 0.0;
    for (int k = 0; k < h.entries.outerSize(); ++k)
        for (SparseMatrixC::InnerIterator it(h.entries, k); it; ++it)
            worst = std::max(worst, std::abs((c(it.row()) + c(it.col())) * it.value()));
    return worst;
}

}  // namespace scarkit
