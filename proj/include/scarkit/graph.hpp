// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file graph.hpp
 * @brief Hilbert-space graph with barrier-labelled edges, components and the tower.
 *
 * Vertices are basis indices.  Each legal hop is one undirected edge tagged
 * with its barrier class; the graph stores classes only, so one graph serves
 * every parameter set.  The tower is the pinnacle
 * |1..1 0..0> plus the L-1 eave states reached from it by moving a single
 * particle or a single hole.
 */

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scarkit/fock_basis.hpp"
#include "scarkit/hamiltonian.hpp"

namespace scarkit {

struct GraphEdge {
    Eigen::Index a = 0;  ///< a < b
    Eigen::Index b = 0;
    BarrierClass barrier = BarrierClass::G;
    int bond = 0;  ///< hop across sites (bond, bond + 1)
};

/// Subset of the three barrier classes.
class ClassSet {
public:
    constexpr ClassSet() = default;
    constexpr ClassSet(std::initializer_list<BarrierClass> classes) {
        for (BarrierClass c : classes) insert(c);
    }
    static constexpr ClassSet all() { return {BarrierClass::GMinusU, BarrierClass::G, BarrierClass::GPlusU}; }
    static constexpr ClassSet none() { return {}; }
    /// Comma separated list such as "g,g-U"; "all" and "none" are accepted.
    static ClassSet parse(const std::string& text);

    constexpr void insert(BarrierClass c) { mask_ |= bit(c); }
    [[nodiscard]] constexpr bool contains(BarrierClass c) const { return (mask_ & bit(c)) != 0; }
    [[nodiscard]] constexpr bool empty() const { return mask_ == 0; }

private:
    static constexpr std::uint8_t bit(BarrierClass c) { return static_cast<std::uint8_t>(1u << static_cast<int>(c)); }
    std::uint8_t mask_ = 0;
};

class HilbertGraph {
public:
    HilbertGraph(std::shared_ptr<const SectorBasis> basis, std::vector<GraphEdge> edges);

    [[nodiscard]] const std::shared_ptr<const SectorBasis>& basis() const noexcept { return basis_; }
    [[nodiscard]] Eigen::Index vertex_count() const noexcept { return static_cast<Eigen::Index>(parity_.size()); }
    [[nodiscard]] const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
    [[nodiscard]] int parity(Eigen::Index v) const { return parity_.at(static_cast<std::size_t>(v)); }

    /// Edge ids incident to v.
    [[nodiscard]] std::vector<std::size_t> incident(Eigen::Index v) const;
    [[nodiscard]] std::size_t degree(Eigen::Index v) const;
    /// Neighbour across edge `e` from v.
    [[nodiscard]] Eigen::Index other(std::size_t e, Eigen::Index v) const;

    [[nodiscard]] std::array<std::size_t, 3> class_histogram() const;
    /// Number of edges joining equal chiral parities; zero for a bipartite graph.
    [[nodiscard]] std::size_t same_parity_edges() const;

private:
    std::shared_ptr<const SectorBasis> basis_;
    std::vector<GraphEdge> edges_;
    std::vector<int> parity_;
    std::vector<std::size_t> offsets_;   // CSR over vertices
    std::vector<std::size_t> incident_;  // edge ids
};

[[nodiscard]] HilbertGraph build_graph(std::shared_ptr<const SectorBasis> basis);

struct Components {
    /// Component label per vertex; labels ordered by the smallest vertex they contain.
    std::vector<std::size_t> label;
    std::vector<std::size_t> sizes;

    [[nodiscard]] std::size_t count() const noexcept { return sizes.size(); }
    [[nodiscard]] std::size_t largest() const noexcept;
};

/// Connected components of the subgraph keeping only `allowed` edges.
[[nodiscard]] Components components(const HilbertGraph& graph, ClassSet allowed);

/**
 * Pinnacle and eaves at half filling, L = 2N, N >= 2.
 *   te_p(q) = 1^{N-1} 0^q 1 0^{N-q}
 *   te_h(q) = 1^{N-q} 0 1^q 0^{N-1}
 * with te_p(1) = te_h(1) stored once.
 */
class Tower {
public:
    explicit Tower(int sites);

    [[nodiscard]] int sites() const noexcept { return sites_; }
    [[nodiscard]] const FockState& pinnacle() const noexcept { return pinnacle_; }
    /// Eaves in chain order: te_h(N) .. te_h(2), te_1, te_p(2) .. te_p(N).
    [[nodiscard]] const std::vector<FockState>& eaves() const noexcept { return eaves_; }
    [[nodiscard]] FockState te_p(int q) const;
    [[nodiscard]] FockState te_h(int q) const;
    /// Eaves followed by the pinnacle; the ordering used by the tower projection.
    [[nodiscard]] std::vector<FockState> ordered_states() const;
    /// Labels matching ordered_states(), e.g. "te_h3", "te1", "te_p2", "tp".
    [[nodiscard]] std::vector<std::string> labels() const;
    [[nodiscard]] bool contains(const FockState& s) const;
    /// Basis indices of ordered_states().  Throws DomainError if the basis is not the half-filled L sector.
    [[nodiscard]] std::vector<Eigen::Index> indices(const SectorBasis& basis) const;

private:
    int sites_ = 0;
    FockState pinnacle_;
    std::vector<FockState> eaves_;
};

[[nodiscard]] Tower tower_states(int sites);

/// Restriction of h to the tower in Tower::ordered_states() order.
[[nodiscard]] Eigen::MatrixXcd spta_matrix(const HamiltonianMatrix& h, const Tower& tower);

/// Graphviz text; edge style by class, node fill by parity, tower vertices outlined.
[[nodiscard]] std::string to_dot(const HilbertGraph& graph);

}  // namespace scarkit
