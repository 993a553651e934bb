// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "scarkit/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "scarkit/errors.hpp"

namespace scarkit {

namespace {

constexpr double kSchmidtFloor = 1e-14;

// Colex rank of a k-subset word among words with the same popcount.
Eigen::Index subset_rank(Word w) {
    Eigen::Index r = 0;
    int i = 1;
    for (; w != 0; w &= w - 1, ++i) r += static_cast<Eigen::Index>(binomial(std::countr_zero(w), i));
    return r;
}

double entropy_of(const std::vector<double>& probabilities) {
    double s = 0.0;
    for (double p : probabilities)
        if (p > 0) s -= p * std::log(p);
    return s;
}

}  // namespace

void StateVector::require_normalized(double tol) const {
    if (std::abs(norm() - 1.0) > tol) throw DomainError("state is not normalized (norm " + std::to_string(norm()) + ")");
}

StateVector basis_state(std::shared_ptr<const SectorBasis> basis, const FockState& f) {
    const auto at = basis->find(f);
    if (!at) throw DomainError("Fock state " + f.to_string() + " is not in the sector basis");
    StateVector s{std::move(basis), {}};
    s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(s.basis->size()));
    s.amplitudes(static_cast<Eigen::Index>(*at)) = 1.0;
    return s;
}

EntanglementCut::EntanglementCut(std::shared_ptr<const SectorBasis> basis, int cut)
    : basis_(std::move(basis)), cut_(cut) {
    const int L = basis_->sites();
    const int N = basis_->particles();
    if (cut < 1 || cut >= L) throw DomainError("entanglement cut must lie in [1, L-1]");
    const int right_sites = L - cut;
    blocks_.resize(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        if (n > cut || N - n > right_sites) continue;
        blocks_[static_cast<std::size_t>(n)] = {static_cast<Eigen::Index>(binomial(cut, n)),
                                                static_cast<Eigen::Index>(binomial(right_sites, N - n))};
    }
    const std::size_t dim = basis_->size();
    block_of_.resize(dim);
    row_of_.resize(dim);
    col_of_.resize(dim);
    const Word right_mask = (Word{1} << right_sites) - 1;
    for (std::size_t a = 0; a < dim; ++a) {
        const Word w = basis_->words()[a];
        const Word left = w >> right_sites;
        const Word right = w & right_mask;
        block_of_[a] = std::popcount(left);
        row_of_[a] = subset_rank(left);
        col_of_[a] = subset_rank(right);
    }
}

std::vector<double> EntanglementCut::schmidt_probabilities(const Eigen::VectorXcd& psi) const {
    if (psi.size() != static_cast<Eigen::Index>(basis_->size()))
        throw DomainError("state dimension does not match the basis");
    std::vector<Eigen::MatrixXcd> mats(blocks_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) mats[b] = Eigen::MatrixXcd::Zero(blocks_[b].rows, blocks_[b].cols);
    for (Eigen::Index a = 0; a < psi.size(); ++a) {
        const auto i = static_cast<std::size_t>(a);
        mats[static_cast<std::size_t>(block_of_[i])](row_of_[i], col_of_[i]) = psi(a);
    }
    std::vector<double> probs;
    for (const Eigen::MatrixXcd& m : mats) {
        if (m.size() == 0) continue;
        if (m.rows() == 1 || m.cols() == 1) {
            const double p = m.squaredNorm();
            if (p > kSchmidtFloor) probs.push_back(p);
            continue;
        }
        // Eigenvalues of the smaller Gram matrix are the Schmidt probabilities.
        const Eigen::MatrixXcd gram = m.rows() <= m.cols() ? Eigen::MatrixXcd(m * m.adjoint())
                                                           : Eigen::MatrixXcd(m.adjoint() * m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
        for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k)
            if (eig.eigenvalues()(k) > kSchmidtFloor) probs.push_back(eig.eigenvalues()(k));
    }
    return probs;
}

double EntanglementCut::entropy(const Eigen::VectorXcd& psi) const {
    if (std::abs(psi.norm() - 1.0) > 1e-10) throw DomainError("entanglement entropy needs a normalized state");
    return entropy_of(schmidt_probabilities(psi));
}

double entanglement_entropy(const StateVector& state, int cut) {
    const int c = cut > 0 ? cut : state.basis->sites() / 2;
    return EntanglementCut(state.basis, c).entropy(state.amplitudes);
}

double shannon_entropy(const Eigen::VectorXcd& psi) {
    double s = 0.0;
    for (Eigen::Index n = 0; n < psi.size(); ++n) {
        const double p = std::norm(psi(n));
        if (p > 0) s -= p * std::log(p);
    }
    return s;
}

double shannon_entropy(const StateVector& state) { return shannon_entropy(state.amplitudes); }

double page_value(int sites) { return 0.5 * sites * std::numbers::ln2 - 0.5; }

double coe_ie_reference(double dimension) { return std::log(0.48 * dimension); }

template <typename Scalar>
double zero_projection(const Spectrum<Scalar>& spectrum, const FockState& f) {
    const auto at = spectrum.basis()->find(f);
    if (!at) throw DomainError("Fock state " + f.to_string() + " is not in the spectrum basis");
    double p = 0.0;
    for (Eigen::Index a : spectrum.zero_indices()) p += spectrum.weight(static_cast<Eigen::Index>(*at), a);
    return p;
}

template <typename Scalar>
StateVector scar_state(const Spectrum<Scalar>& spectrum, const FockState& f) {
    const double p0 = zero_projection(spectrum, f);
    if (!(p0 > 1e-12))
        throw DomainError("kernel projection P0 = " + std::to_string(p0) + " of " + f.to_string() + " vanishes");
    const auto n0 = static_cast<Eigen::Index>(*spectrum.basis()->find(f));
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(spectrum.dimension());
    for (Eigen::Index a : spectrum.zero_indices()) c(a) = std::conj(spectrum.amplitude(n0, a));
    StateVector s{spectrum.basis(), spectrum.from_eigenbasis(c) / std::sqrt(p0)};
    return s;
}

template <typename Scalar>
std::vector<OverlapRow> overlap_table(const Spectrum<Scalar>& spectrum, const FockState& f, bool aggregate) {
    const auto at = spectrum.basis()->find(f);
    if (!at) throw DomainError("Fock state " + f.to_string() + " is not in the spectrum basis");
    const auto n0 = static_cast<Eigen::Index>(*at);
    const Eigen::VectorXd& eps = spectrum.quasienergies();
    std::vector<OverlapRow> rows;
    if (!aggregate) {
        for (Eigen::Index a = 0; a < spectrum.dimension(); ++a) rows.push_back({eps(a), spectrum.weight(n0, a), 1});
        return rows;
    }
    // The kernel becomes one row at zero; other levels merge within the degeneracy width.
    std::vector<bool> kernel(static_cast<std::size_t>(spectrum.dimension()), false);
    OverlapRow zero{0.0, 0.0, 0};
    for (Eigen::Index a : spectrum.zero_indices()) {
        kernel[static_cast<std::size_t>(a)] = true;
        zero.weight += spectrum.weight(n0, a);
        ++zero.multiplicity;
    }
    double cluster_start = 0.0;
    bool open_cluster = false;  // rows.back() may absorb further levels
    bool zero_placed = zero.multiplicity == 0;
    for (Eigen::Index a = 0; a < spectrum.dimension(); ++a) {
        if (kernel[static_cast<std::size_t>(a)]) continue;
        if (!zero_placed && eps(a) > 0) {
            rows.push_back(zero);
            zero_placed = true;
            open_cluster = false;
        }
        const double w = spectrum.weight(n0, a);
        if (open_cluster && eps(a) - cluster_start <= kDegeneracyWidth) {
            OverlapRow& last = rows.back();
            last.quasienergy = (last.quasienergy * static_cast<double>(last.multiplicity) + eps(a)) /
                               static_cast<double>(last.multiplicity + 1);
            last.weight += w;
            ++last.multiplicity;
            continue;
        }
        cluster_start = eps(a);
        open_cluster = true;
        rows.push_back({eps(a), w, 1});
    }
    if (!zero_placed) rows.push_back(zero);
    return rows;
}

template <typename Scalar>
Eigen::VectorXd eigenstate_entanglement(const Spectrum<Scalar>& spectrum, int cut) {
    const int c = cut > 0 ? cut : spectrum.basis()->sites() / 2;
    const EntanglementCut ec(spectrum.basis(), c);
    Eigen::VectorXd out(spectrum.dimension());
    for (Eigen::Index a = 0; a < spectrum.dimension(); ++a) out(a) = ec.entropy(spectrum.eigenvector(a));
    return out;
}

template <typename Scalar>
Eigen::VectorXd eigenstate_shannon(const Spectrum<Scalar>& spectrum) {
    Eigen::VectorXd out(spectrum.dimension());
    for (Eigen::Index a = 0; a < spectrum.dimension(); ++a) {
        double s = 0.0;
        for (Eigen::Index n = 0; n < spectrum.dimension(); ++n) {
            const double p = spectrum.weight(n, a);
            if (p > 0) s -= p * std::log(p);
        }
        out(a) = s;
    }
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) throw DomainError("median of an empty set");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

template <typename Scalar>
double central_band_median(const Spectrum<Scalar>& spectrum, const Eigen::VectorXd& values, double fraction) {
    if (values.size() != spectrum.dimension()) throw DomainError("one value per eigenstate expected");
    if (!(fraction > 0 && fraction <= 1)) throw DomainError("band fraction must lie in (0, 1]");
    std::vector<bool> kernel(static_cast<std::size_t>(spectrum.dimension()), false);
    for (Eigen::Index a : spectrum.zero_indices()) kernel[static_cast<std::size_t>(a)] = true;
    std::vector<Eigen::Index> ranked;  // already sorted by quasienergy
    for (Eigen::Index a = 0; a < spectrum.dimension(); ++a)
        if (!kernel[static_cast<std::size_t>(a)]) ranked.push_back(a);
    if (ranked.empty()) throw DomainError("no non-kernel eigenstates");
    const auto keep = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * ranked.size())));
    const std::size_t first = (ranked.size() - keep) / 2;
    std::vector<double> picked;
    for (std::size_t i = first; i < first + keep; ++i) picked.push_back(values(ranked[i]));
    return median(std::move(picked));
}

std::vector<Eigen::Index> low_outliers(const Eigen::VectorXd& values, double mads,
                                       const std::vector<Eigen::Index>& exclude) {
    std::vector<bool> skip(static_cast<std::size_t>(values.size()), false);
    for (Eigen::Index e : exclude) skip.at(static_cast<std::size_t>(e)) = true;
    std::vector<double> kept;
    for (Eigen::Index a = 0; a < values.size(); ++a)
        if (!skip[static_cast<std::size_t>(a)]) kept.push_back(values(a));
    if (kept.empty()) return {};
    const double m = median(kept);
    std::vector<double> dev;
    for (double v : kept) dev.push_back(std::abs(v - m));
    const double mad = median(dev);
    std::vector<Eigen::Index> out;
    for (Eigen::Index a = 0; a < values.size(); ++a)
        if (!skip[static_cast<std::size_t>(a)] && values(a) < m - mads * mad) out.push_back(a);
    return out;
}

template <typename Scalar>
ScarSummary scar_summary(const Spectrum<Scalar>& spectrum, const FockState& f) {
    ScarSummary out;
    out.p0 = zero_projection(spectrum, f);
    out.state = scar_state(spectrum, f);
    const auto n0 = static_cast<Eigen::Index>(*spectrum.basis()->find(f));
    out.overlap = std::norm(out.state.amplitudes(n0));
    out.entanglement = entanglement_entropy(out.state);
    out.shannon = shannon_entropy(out.state);
    out.page = page_value(spectrum.basis()->sites());
    out.coe_ie = coe_ie_reference(static_cast<double>(spectrum.dimension()));
    return out;
}

#define SCARKIT_INSTANTIATE(S)                                                                       \
    template double zero_projection(const Spectrum<S>&, const FockState&);                           \
    template StateVector scar_state(const Spectrum<S>&, const FockState&);                           \
    template std::vector<OverlapRow> overlap_table(const Spectrum<S>&, const FockState&, bool);      \
    template Eigen::VectorXd eigenstate_entanglement(const Spectrum<S>&, int);                       \
    template Eigen::VectorXd eigenstate_shannon(const Spectrum<S>&);                                 \
    template double central_band_median(const Spectrum<S>&, const Eigen::VectorXd&, double);         \
    template ScarSummary scar_summary(const Spectrum<S>&, const FockState&);

SCARKIT_INSTANTIATE(double)
SCARKIT_INSTANTIATE(std::complex<double>)
#undef SCARKIT_INSTANTIATE

}  // namespace scarkit
