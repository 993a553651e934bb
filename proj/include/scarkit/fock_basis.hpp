// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock_basis.hpp
 * @brief Occupation-number states of an open chain of spinless fermions.
 *
 * Sites are numbered 1..L.  Site j lives in bit (L - j) of the occupation
 * word, so printing the word most-significant bit first yields the ket
 * |n_1 n_2 ... n_L> and numeric order of words is lexicographic order of
 * the occupation strings.
 */

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scarkit {

using Word = std::uint64_t;

inline constexpr int kMaxSites = 63;

/// binomial(n, k) for 0 <= n <= 64, read from a precomputed table.
[[nodiscard]] std::uint64_t binomial(int n, int k);

class FockState {
public:
    constexpr FockState() = default;
    /// Throws DomainError if length is outside [0, 63] or bits reach past the chain.
    FockState(Word bits, int length);

    /// Parse "1100" style strings; site 1 is the leftmost character.
    static FockState from_string(std::string_view occupations);

    [[nodiscard]] constexpr Word bits() const noexcept { return bits_; }
    [[nodiscard]] constexpr int length() const noexcept { return length_; }
    [[nodiscard]] int particles() const noexcept { return std::popcount(bits_); }

    /// Occupation of site j (1-based).  Sites 0 and L+1 are virtual and always empty.
    [[nodiscard]] constexpr int occupation(int site) const noexcept {
        if (site < 1 || site > length_) return 0;
        return static_cast<int>((bits_ >> (length_ - site)) & 1u);
    }

    /// Move the particle on site `from` to the empty site `to`.
    [[nodiscard]] FockState moved(int from, int to) const;

    [[nodiscard]] std::string to_string() const;

    friend constexpr bool operator==(const FockState&, const FockState&) = default;
    friend constexpr auto operator<=>(const FockState& a, const FockState& b) {
        return a.bits_ <=> b.bits_;
    }

private:
    Word bits_ = 0;
    int length_ = 0;
};

/// Sum of j n_j with 1-based sites.
[[nodiscard]] long dipole_moment(const FockState& state) noexcept;

/// Eigenvalue of (-1)^D, the chiral operator.
[[nodiscard]] int chiral_parity(const FockState& state) noexcept;

[[nodiscard]] FockState spatial_reverse(const FockState& state) noexcept;

/// Number of occupied nearest-neighbour pairs.
[[nodiscard]] int adjacent_pairs(const FockState& state) noexcept;

/// |(1...1)^N (0...0)^(L-N)>, the pinnacle state at half filling.
[[nodiscard]] FockState domain_wall_state(int sites, int particles);

/**
 * All Fock states with N particles on L sites, in ascending word order.
 *
 * Immutable after construction.  rank() is computed combinatorially from
 * the set-bit positions, so no hash table is kept.
 */
class SectorBasis {
public:
    SectorBasis(int sites, int particles);

    [[nodiscard]] int sites() const noexcept { return sites_; }
    [[nodiscard]] int particles() const noexcept { return particles_; }
    [[nodiscard]] std::size_t size() const noexcept { return words_.size(); }

    [[nodiscard]] FockState state(std::size_t index) const { return {words_.at(index), sites_}; }
    [[nodiscard]] std::span<const Word> words() const noexcept { return words_; }

    /// Position of `bits` in the basis, or nullopt if it is not in this sector.
    [[nodiscard]] std::optional<std::size_t> find(Word bits) const noexcept;
    [[nodiscard]] std::optional<std::size_t> find(const FockState& s) const noexcept;

    /// Like find(), but throws DomainError for states outside the sector.
    [[nodiscard]] std::size_t rank(const FockState& s) const;
    [[nodiscard]] FockState unrank(std::size_t index) const;

    friend bool operator==(const SectorBasis& a, const SectorBasis& b) noexcept {
        return a.sites_ == b.sites_ && a.particles_ == b.particles_;
    }

private:
    int sites_;
    int particles_;
    std::vector<Word> words_;
};

/// Largest sector we are willing to enumerate into memory.
inline constexpr std::uint64_t kMaxEnumeratedStates = std::uint64_t{1} << 28;

/// Same as the constructor; kept as a free function for symmetry with the other modules.
[[nodiscard]] SectorBasis enumerate_sector(int sites, int particles);

struct ChiralSplit {
    std::uint64_t n_plus = 0;
    std::uint64_t n_minus = 0;
    /// +1 or -1; 0 when the two sectors have equal dimension.
    int larger_sector = 0;

    [[nodiscard]] std::uint64_t difference() const noexcept {
        return n_plus > n_minus ? n_plus - n_minus : n_minus - n_plus;
    }
    friend bool operator==(const ChiralSplit&, const ChiralSplit&) = default;
};

/// Counts by enumerating chiral parities over the basis.
[[nodiscard]] ChiralSplit subspace_dims(const SectorBasis& basis);

/**
 * Closed-form sector dimensions at L = 2N.  A state is chiral-even iff an
 * even number of particles sit on odd sites, giving
 * N+ = sum_{m even} C(N,m)^2 and N- = sum_{m odd} C(N,m)^2.
 */
[[nodiscard]] ChiralSplit subspace_dims_formula(int particles);

/// |N+ - N-| at L = 2N: 0 for odd N, N!/((N/2)!)^2 for even N.
[[nodiscard]] std::uint64_t dim_difference_formula(int particles);

/// Whether the pinnacle at L = 2N lies in the larger chiral sector.  Needs N even.
[[nodiscard]] bool pinnacle_in_larger_sector(int sites);

}  // namespace scarkit
