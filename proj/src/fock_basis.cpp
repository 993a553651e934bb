// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "scarkit/fock_basis.hpp"

#include <array>

#include "scarkit/errors.hpp"

namespace scarkit {

namespace {

constexpr int kTable = 65;

constexpr auto make_binomials() {
    std::array<std::array<std::uint64_t, kTable>, kTable> c{};
    for (int n = 0; n < kTable; ++n) {
        c[n][0] = 1;
        for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k < n ? c[n - 1][k] : 0);
    }
    return c;
}

constexpr auto kBinomials = make_binomials();

Word site_mask(int length) {
    return length == 64 ? ~Word{0} : (Word{1} << length) - 1;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
    if (n < 0 || n >= kTable || k < 0 || k > n) return 0;
    return kBinomials[n][k];
}

FockState::FockState(Word bits, int length) : bits_(bits), length_(length) {
    if (length < 0 || length > kMaxSites)
        throw DomainError("chain length " + std::to_string(length) + " outside [0, 63]");
    if ((bits & ~site_mask(length)) != 0)
        throw DomainError("occupation word has bits beyond site " + std::to_string(length));
}

FockState FockState::from_string(std::string_view occupations) {
    if (occupations.size() > static_cast<std::size_t>(kMaxSites))
        throw DomainError("occupation string longer than 63 sites");
    Word bits = 0;
    for (char c : occupations) {
        if (c != '0' && c != '1')
            throw DomainError("occupation string may contain only '0' and '1'");
        bits = (bits << 1) | static_cast<Word>(c == '1');
    }
    return {bits, static_cast<int>(occupations.size())};
}

FockState FockState::moved(int from, int to) const {
    if (occupation(from) != 1 || occupation(to) != 0 || to < 1 || to > length_)
        throw DomainError("illegal move " + std::to_string(from) + "->" + std::to_string(to) +
                          " on " + to_string());
    const Word flip = (Word{1} << (length_ - from)) | (Word{1} << (length_ - to));
    return {bits_ ^ flip, length_};
}

std::string FockState::to_string() const {
    std::string s(static_cast<std::size_t>(length_), '0');
    for (int j = 1; j <= length_; ++j)
        if (occupation(j)) s[static_cast<std::size_t>(j - 1)] = '1';
    return s;
}

long dipole_moment(const FockState& state) noexcept {
    long d = 0;
    for (Word w = state.bits(); w != 0; w &= w - 1) {
        const int bit = std::countr_zero(w);
        d += state.length() - bit;
    }
    return d;
}

int chiral_parity(const FockState& state) noexcept {
    return (dipole_moment(state) & 1L) ? -1 : 1;
}

FockState spatial_reverse(const FockState& state) noexcept {
    Word out = 0;
    const int len = state.length();
    for (Word w = state.bits(); w != 0; w &= w - 1) {
        const int bit = std::countr_zero(w);
        out |= Word{1} << (len - 1 - bit);
    }
    return {out, len};
}

int adjacent_pairs(const FockState& state) noexcept {
    return std::popcount(state.bits() & (state.bits() >> 1));
}

FockState domain_wall_state(int sites, int particles) {
    if (particles < 0 || particles > sites)
        throw DomainError("pinnacle needs 0 <= N <= L");
    const Word ones = particles == 0 ? 0 : ((Word{1} << particles) - 1);
    return {ones << (sites - particles), sites};
}

SectorBasis::SectorBasis(int sites, int particles) : sites_(sites), particles_(particles) {
    if (sites < 0 || sites > kMaxSites)
        throw DomainError("L = " + std::to_string(sites) + " outside [0, 63]");
    if (particles < 0 || particles > sites)
        throw DomainError("N = " + std::to_string(particles) + " outside [0, L]");
    const std::uint64_t count = binomial(sites, particles);
    if (count > kMaxEnumeratedStates)
        throw CapabilityError("sector of " + std::to_string(count) + " states is too large to enumerate");

    words_.reserve(static_cast<std::size_t>(count));
    if (particles == 0) {
        words_.push_back(0);
        return;
    }
    // Gosper's hack walks popcount-N words in ascending order.
    Word w = (Word{1} << particles) - 1;
    const Word limit = Word{1} << sites;
    while (w < limit) {
        words_.push_back(w);
        const Word lowest = w & (~w + 1);
        const Word ripple = w + lowest;
        w = ripple | (((w ^ ripple) >> 2) / lowest);
    }
}

std::optional<std::size_t> SectorBasis::find(Word bits) const noexcept {
    if ((bits & ~site_mask(sites_)) != 0 || std::popcount(bits) != particles_) return std::nullopt;
    std::uint64_t r = 0;
    int i = 1;
    for (Word w = bits; w != 0; w &= w - 1, ++i) r += kBinomials[std::countr_zero(w)][i];
    return static_cast<std::size_t>(r);
}

std::optional<std::size_t> SectorBasis::find(const FockState& s) const noexcept {
    if (s.length() != sites_) return std::nullopt;
    return find(s.bits());
}

std::size_t SectorBasis::rank(const FockState& s) const {
    auto r = find(s);
    if (!r) throw DomainError("state " + s.to_string() + " is not in the (L=" + std::to_string(sites_) +
                              ", N=" + std::to_string(particles_) + ") sector");
    return *r;
}

FockState SectorBasis::unrank(std::size_t index) const {
    if (index >= size()) throw DomainError("rank " + std::to_string(index) + " out of range");
    std::uint64_t r = index;
    Word bits = 0;
    for (int i = particles_; i >= 1; --i) {
        int p = i - 1;
        while (p + 1 < sites_ && kBinomials[p + 1][i] <= r) ++p;
        bits |= Word{1} << p;
        r -= kBinomials[p][i];
    }
    return {bits, sites_};
}

SectorBasis enumerate_sector(int sites, int particles) { return {sites, particles}; }

ChiralSplit subspace_dims(const SectorBasis& basis) {
    ChiralSplit split;
    for (Word w : basis.words()) {
        if (chiral_parity(FockState{w, basis.sites()}) > 0)
            ++split.n_plus;
        else
            ++split.n_minus;
    }
    split.larger_sector = split.n_plus > split.n_minus ? 1 : (split.n_plus < split.n_minus ? -1 : 0);
    return split;
}

ChiralSplit subspace_dims_formula(int particles) {
    if (particles < 0 || 2 * particles > kMaxSites + 1)
        throw DomainError("closed-form sector dimensions need 0 <= N <= 32");
    ChiralSplit split;
    for (int m = 0; m <= particles; ++m) {
        const std::uint64_t c = binomial(particles, m);
        (m % 2 == 0 ? split.n_plus : split.n_minus) += c * c;
    }
    split.larger_sector = split.n_plus > split.n_minus ? 1 : (split.n_plus < split.n_minus ? -1 : 0);
    return split;
}

std::uint64_t dim_difference_formula(int particles) {
    if (particles < 1) throw DomainError("dimension difference needs N >= 1");
    if (particles % 2 == 1) return 0;
    return binomial(particles, particles / 2);
}

bool pinnacle_in_larger_sector(int sites) {
    if (sites < 2 || sites % 2 != 0) throw DomainError("pinnacle test needs L = 2N");
    const int n = sites / 2;
    if (n % 2 != 0) throw DomainError("no larger chiral sector exists for odd N = " + std::to_string(n));
    const FockState tp = domain_wall_state(sites, n);
    const ChiralSplit split = binomial(sites, n) <= (std::uint64_t{1} << 22)
                                  ? subspace_dims(SectorBasis{sites, n})
                                  : subspace_dims_formula(n);
    return chiral_parity(tp) == split.larger_sector;
}

}  // namespace scarkit
