// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <set>

#include "scarkit/errors.hpp"
#include "scarkit/graph.hpp"
#include "scarkit/spectral.hpp"

using namespace scarkit;

namespace {

FockState fs(const char* s) { return FockState::from_string(s); }

std::shared_ptr<const SectorBasis> sector(int L, int N) { return std::make_shared<const SectorBasis>(L, N); }

// Edge count by scanning all ordered state pairs for a single adjacent move.
std::size_t brute_edges(const SectorBasis& b) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            const Word d = b.words()[i] ^ b.words()[j];
            if (std::popcount(d) == 2 && ((d >> std::countr_zero(d)) == 0b11u)) ++count;
        }
    }
    return count;
}

}  // namespace

TEST_SUITE("graph") {
TEST_CASE("small graphs") {
    const HilbertGraph g4 = build_graph(sector(4, 2));
    CHECK(g4.vertex_count() == 6);
    // Six rightward hops in total: 1100, 1001, 0110, 0101 have one, 1010 has two.
    CHECK(g4.edges().size() == 6);
    CHECK(g4.edges().size() == brute_edges(*g4.basis()));
    const auto hist = g4.class_histogram();
    CHECK(hist[0] == 2);  // 1010-0110, 0101-0011
    CHECK(hist[1] == 2);  // 1010-1001, 1001-0101
    CHECK(hist[2] == 2);  // 1100-1010, 0110-0101

    const HilbertGraph g2 = build_graph(sector(2, 1));
    REQUIRE(g2.edges().size() == 1);
    CHECK(g2.edges()[0].barrier == BarrierClass::G);
}

TEST_CASE("edges match a brute-force scan and the resonant operator") {
    const ResonantFamily f = resonant_family(0, 0, Branch::Plus);
    const ModelParams p = f.params(50.0, 0.5);
    const ResonantAmplitudes amp = resonant_amplitudes(p, f);
    for (int L : {4, 6, 8, 10}) {
        const auto b = sector(L, L / 2);
        const HilbertGraph g = build_graph(b);
        CHECK(g.edges().size() == brute_edges(*b));
        CHECK(g.same_parity_edges() == 0);
        const HamiltonianMatrix h = build_effective_resonant(p, f, b);
        CHECK(static_cast<std::size_t>(h.entries.nonZeros()) == 2 * g.edges().size());
        for (const GraphEdge& e : g.edges()) {
            CHECK(e.a < e.b);
            CHECK(std::abs(std::abs(h.entries.coeff(e.a, e.b)) - std::abs(amp[e.barrier])) < 1e-12);
        }
    }
    for (int L : {12, 14, 16}) CHECK(build_graph(sector(L, L / 2)).same_parity_edges() == 0);
}

TEST_CASE("pinnacle at L=6") {
    const auto b = sector(6, 3);
    const HilbertGraph g = build_graph(b);
    CHECK(g.vertex_count() == 20);
    const auto tp = static_cast<Eigen::Index>(*b->find(fs("111000")));
    REQUIRE(g.degree(tp) == 1);
    const std::size_t e = g.incident(tp).front();
    CHECK(g.edges()[e].barrier == BarrierClass::GPlusU);
    CHECK(b->state(static_cast<std::size_t>(g.other(e, tp))) == fs("110100"));
}

TEST_CASE("components") {
    for (int L : {4, 6}) {
        const auto b = sector(L, L / 2);
        const HilbertGraph g = build_graph(b);
        const Components all = components(g, ClassSet::all());
        CHECK(all.count() == 1);
        CHECK(all.largest() == b->size());
        const Components none = components(g, ClassSet::none());
        CHECK(none.count() == b->size());
        for (std::size_t v = 0; v < b->size(); ++v) CHECK(none.label[v] == v);
    }
    const auto b = sector(6, 3);
    const HilbertGraph g = build_graph(b);
    const Components frag = components(g, {BarrierClass::GMinusU, BarrierClass::G});
    const auto tp = *b->find(fs("111000"));
    CHECK(frag.sizes[frag.label[tp]] == 1);
    CHECK(frag.count() > 1);
    // Labels are ordered by the smallest member.
    std::size_t next = 0;
    for (std::size_t v = 0; v < b->size(); ++v) {
        CHECK(frag.label[v] <= next);
        if (frag.label[v] == next) ++next;
    }
    CHECK(ClassSet::parse("g,g-U").contains(BarrierClass::G));
    CHECK_FALSE(ClassSet::parse("g,g-U").contains(BarrierClass::GPlusU));
    CHECK(ClassSet::parse("none").empty());
}

TEST_CASE("tower states") {
    const Tower t6 = tower_states(6);
    CHECK(t6.pinnacle() == fs("111000"));
    const std::set<std::string> expected{"110100", "110010", "110001", "101100", "011100"};
    std::set<std::string> got;
    for (const FockState& s : t6.eaves()) got.insert(s.to_string());
    CHECK(got == expected);
    CHECK(t6.te_p(1) == t6.te_h(1));

    const Tower t4 = tower_states(4);
    std::set<std::string> got4;
    for (const FockState& s : t4.eaves()) got4.insert(s.to_string());
    CHECK(got4 == std::set<std::string>{"1010", "1001", "0110"});
    CHECK(t4.te_p(1) == fs("1010"));

    for (int L : {6, 8, 10}) CHECK(tower_states(L).eaves().size() == static_cast<std::size_t>(L - 1));
    CHECK_THROWS_AS((void)tower_states(2), DomainError);
    CHECK_THROWS_AS((void)tower_states(7), DomainError);
}

TEST_CASE("tower adjacency is a path with the pinnacle as a leaf") {
    for (int L : {6, 8, 10, 12}) {
        const auto b = sector(L, L / 2);
        const HilbertGraph g = build_graph(b);
        const Tower t(L);
        const std::vector<Eigen::Index> idx = t.indices(*b);
        std::set<Eigen::Index> members(idx.begin(), idx.end());
        std::size_t internal = 0;
        for (const GraphEdge& e : g.edges()) internal += members.count(e.a) && members.count(e.b);
        CHECK(internal == static_cast<std::size_t>(L - 1));  // tree on L vertices
        const Eigen::Index tp = idx.back();
        CHECK(g.degree(tp) == 1);
        CHECK(g.edges()[g.incident(tp).front()].barrier == BarrierClass::GPlusU);
        CHECK(g.other(g.incident(tp).front(), tp) == idx[static_cast<std::size_t>(L / 2 - 1)]);  // te1
        // Consecutive entries of the ordered eaves are graph neighbours.
        for (std::size_t i = 0; i + 2 < idx.size(); ++i) {
            bool linked = false;
            for (std::size_t e : g.incident(idx[i])) linked = linked || g.other(e, idx[i]) == idx[i + 1];
            CHECK(linked);
        }
        // Escape edges: all eaves except te1 leave the tower through a g+U hop.
        for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
            bool escape = false;
            for (std::size_t e : g.incident(idx[i]))
                escape = escape || (!members.count(g.other(e, idx[i])) && g.edges()[e].barrier == BarrierClass::GPlusU);
            if (static_cast<int>(i) == L / 2 - 1) CHECK_FALSE(escape);
            else CHECK(escape);
        }
    }
}

TEST_CASE("tower projection") {
    const ResonantFamily f = resonant_family(0, 0, Branch::Plus);
    const ModelParams p = f.params(50.0, 0.5);
    const ResonantAmplitudes a = resonant_amplitudes(p, f);
    const auto b = sector(6, 3);
    const HamiltonianMatrix h = build_effective_resonant(p, f, b);
    const Eigen::MatrixXcd m = spta_matrix(h, Tower(6));
    REQUIRE(m.rows() == 6);
    CHECK((m - m.adjoint()).norm() == 0.0);
    const Eigen::Index tp = 5;
    int nonzero = 0;
    for (Eigen::Index c = 0; c < 6; ++c)
        if (std::abs(m(tp, c)) > 0) {
            ++nonzero;
            CHECK(std::abs(m(tp, c)) == doctest::Approx(a.a3));
        }
    CHECK(nonzero == 1);
    // te_p2 -> te_p3 is a plain g hop.
    CHECK(std::abs(m(3, 4)) == doctest::Approx(a.a2));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
    CHECK(mirror_symmetry_defect(eig.eigenvalues()) < 1e-12);
}

TEST_CASE("dot output") {
    const std::string dot = to_dot(build_graph(sector(6, 3)));
    std::size_t nodes = 0;
    for (std::size_t pos = dot.find("label=\"", 0); pos != std::string::npos; pos = dot.find("label=\"", pos + 1))
        if (dot.compare(pos + 7, 1, "0") == 0 || dot.compare(pos + 7, 1, "1") == 0) ++nodes;
    CHECK(nodes == 20);
    CHECK(dot.find("dotted") != std::string::npos);
}
}
