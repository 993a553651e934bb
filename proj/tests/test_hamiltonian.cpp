// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scarkit/errors.hpp"
#include "scarkit/hamiltonian.hpp"

using namespace scarkit;

namespace {

FockState fs(const char* s) { return FockState::from_string(s); }

std::shared_ptr<const SectorBasis> sector(int L, int N) { return std::make_shared<const SectorBasis>(L, N); }

ModelParams make(double U, double g, double u, double omega) {
    ModelParams p;
    p.U = U;
    p.g = g;
    p.u = u;
    p.omega = omega;
    return p;
}

ModelParams resonant_default() { return resonant_family(0, 0, Branch::Plus).params(50.0, 0.5); }

// Cycle average of J (1 + u(t)) e^{i Delta t} by composite Simpson quadrature.
Complex quadrature_amplitude(double delta, const ModelParams& p) {
    const double T = p.period();
    const int n = 20000;  // even panel count per half period
    Complex total = 0.0;
    for (int half = 0; half < 2; ++half) {
        const double scale = half == 0 ? 1.0 - p.u : 1.0 + p.u;
        const double a = half * T / 2.0;
        const double h = (T / 2.0) / n;
        Complex s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            s += w * std::polar(1.0, delta * (a + i * h));
        }
        total += scale * s * h / 3.0;
    }
    return p.J * total / T;
}

double max_entry_difference(const SparseMatrixC& a, const SparseMatrixC& b) {
    const SparseMatrixC d = a - b;
    double worst = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SparseMatrixC::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

}  // namespace

TEST_SUITE("hamiltonian") {
TEST_CASE("on-site energies") {
    const ModelParams p = make(100, 50, 0.5, 50);
    CHECK(onsite_energy(fs("1100"), p) == doctest::Approx(-50));
    CHECK(onsite_energy(fs("1010"), p) == doctest::Approx(-200));
    CHECK(onsite_energy(fs("0000"), p) == 0.0);
}

TEST_CASE("hop classification examples") {
    const ModelParams p = make(100, 50, 0.5, 50);
    const auto c = classify_hop(fs("1100"), 2, p);
    REQUIRE(c.has_value());
    CHECK(c->barrier == BarrierClass::GPlusU);
    CHECK(c->signed_delta == doctest::Approx(-150));
    CHECK(classify_hop(fs("0110"), 1, p)->barrier == BarrierClass::GMinusU);
    CHECK(classify_hop(fs("110010"), 4, p)->barrier == BarrierClass::G);
    CHECK_FALSE(classify_hop(fs("1100"), 1, p).has_value());
    CHECK_FALSE(classify_hop(fs("1100"), 3, p).has_value());
    CHECK_THROWS_AS((void)classify_hop(fs("1100"), 4, p), DomainError);
}

TEST_CASE("projector completeness and sign consistency against energy differences") {
    // Generic U, g so the three barriers are distinguishable.
    const ModelParams p = make(1.37, 3.1, 0.5, 1.0);
    for (int L = 2; L <= 10; ++L) {
        for (int N = 0; N <= L; ++N) {
            const SectorBasis b(L, N);
            for (std::size_t i = 0; i < b.size(); ++i) {
                const FockState s = b.state(i);
                for (int j = 1; j < L; ++j) {
                    const auto c = classify_hop(s, j, p);
                    if (s.occupation(j) == s.occupation(j + 1)) {
                        CHECK_FALSE(c.has_value());
                        continue;
                    }
                    REQUIRE(c.has_value());
                    const int l = s.occupation(j - 1), r = s.occupation(j + 2);
                    const int fired = r * (1 - l) + (l * r + (1 - l) * (1 - r)) + l * (1 - r);
                    CHECK(fired == 1);
                    const double mag = std::abs(c->signed_delta);
                    BarrierClass from_energy = BarrierClass::G;
                    if (std::abs(mag - std::abs(p.g - p.U)) < 1e-12) from_energy = BarrierClass::GMinusU;
                    else if (std::abs(mag - (p.g + p.U)) < 1e-12) from_energy = BarrierClass::GPlusU;
                    else CHECK(std::abs(mag - p.g) < 1e-12);
                    CHECK(from_energy == c->barrier);
                }
            }
        }
    }
}

TEST_CASE("hop operator") {
    const ModelParams p = make(1, 1, 0, 1);
    const HamiltonianMatrix h4 = build_hop_operator(sector(4, 2), p);
    CHECK(h4.dimension() == 6);
    CHECK(h4.entries.nonZeros() == 12);
    CHECK(h4.hermiticity_defect() == 0.0);
    const Eigen::MatrixXcd d2 = build_hop_operator(sector(2, 1), p).dense();
    CHECK(d2(0, 1) == Complex(1, 0));
    CHECK(d2(1, 0) == Complex(1, 0));
    CHECK(d2(0, 0) == Complex(0, 0));

    const auto b = sector(8, 4);
    const HamiltonianMatrix h8 = build_hop_operator(b, p);
    const Eigen::MatrixXcd d8 = h8.dense();
    for (std::size_t i = 0; i < b->size(); ++i) {
        const FockState s = b->state(i);
        int legal = 0;
        for (int j = 1; j < 8; ++j) legal += s.occupation(j) != s.occupation(j + 1);
        CHECK(d8.row(static_cast<Eigen::Index>(i)).cwiseAbs().sum() == doctest::Approx(legal));
    }
}

TEST_CASE("fermionic sign of adjacent hops is trivial") {
    const SectorBasis b(8, 4);
    for (std::size_t i = 0; i < b.size(); ++i)
        for (int j = 1; j < 8; ++j) CHECK(hop_sign(b.state(i), j, j + 1) == 1);
    CHECK(hop_sign(fs("1110"), 1, 4) == 1);   // two occupied sites in between
    CHECK(hop_sign(fs("1100"), 1, 3) == -1);  // one occupied site in between
}

TEST_CASE("half-period Hamiltonians") {
    const auto b = sector(4, 2);
    const ModelParams p = make(100, 50, 0.5, 50);
    const Eigen::MatrixXcd h1 = build_half_period(p, 1, b).dense();
    const Eigen::MatrixXcd h2 = build_half_period(p, 2, b).dense();
    const Eigen::MatrixXcd on = build_onsite(b, p).dense();
    const Eigen::MatrixXcd hop = build_hop_operator(b, p).dense();
    CHECK((h1 - on - 0.5 * hop).norm() < 1e-14);
    CHECK((h2 - on - 1.5 * hop).norm() < 1e-14);
    const ModelParams q = make(100, 50, 0.0, 50);
    CHECK((build_half_period(q, 1, b).dense() - build_half_period(q, 2, b).dense()).norm() == 0.0);
    CHECK_THROWS_AS((void)build_half_period(p, 3, b), DomainError);
}

TEST_CASE("drive-assisted amplitudes") {
    const ModelParams p = resonant_default();
    const FirstOrderAmplitudes a = amplitudes_general(p);
    const double pi = std::numbers::pi;
    CHECK(std::abs(a.j1) == doctest::Approx(2 * 0.5 / pi).epsilon(1e-12));
    CHECK(std::abs(a.j2) == doctest::Approx(2 * 0.5 / pi).epsilon(1e-12));
    CHECK(std::abs(a.j3) == doctest::Approx(2 * 0.5 / (3 * pi)).epsilon(1e-12));

    const ModelParams equal = make(7.0, 7.0, 0.3, 5.0);
    CHECK(amplitudes_general(equal).j1 == Complex(1.0, 0.0));

    const ModelParams still = make(1.0, 100.0, 0.0, 50.0);  // gT = 4 pi
    CHECK(std::abs(amplitudes_general(still).j2) < 1e-14);

    // Against the direct cycle average of the interaction-picture hop.
    for (double delta : {-37.0, -50.0, 13.3, 50.0, 150.0, 71.9}) {
        const Complex exact = drive_assisted_amplitude(delta, p);
        CHECK(std::abs(exact - quadrature_amplitude(delta, p)) < 1e-12);
    }
}

TEST_CASE("resonant amplitudes") {
    const ModelParams p = resonant_default();
    const ResonantAmplitudes a = resonant_amplitudes(p, resonant_family(0, 0, Branch::Plus));
    const double pi = std::numbers::pi;
    CHECK(a.a1 == doctest::Approx(-1 / pi).epsilon(1e-14));
    CHECK(a.a2 == doctest::Approx(1 / pi).epsilon(1e-14));
    CHECK(a.a3 == doctest::Approx(1 / (3 * pi)).epsilon(1e-14));
    for (int k1 = 0; k1 < 4; ++k1) {
        for (int k2 = 0; k2 < 5; ++k2) {
            for (Branch br : {Branch::Plus, Branch::Minus}) {
                if (br == Branch::Minus && k2 <= k1) continue;
                const ResonantFamily f = resonant_family(k1, k2, br);
                const ResonantAmplitudes r = resonant_amplitudes(f.params(30.0, 0.5), f);
                CHECK(std::abs(r.a3) < std::abs(r.a2));
            }
        }
    }
    ModelParams off = p;
    off.U *= 1.001;
    CHECK_THROWS_AS((void)resonant_amplitudes(off, resonant_family(0, 0, Branch::Plus)), DomainError);
    CHECK_THROWS_AS((void)build_effective_resonant(off, 0, 0, Branch::Plus, sector(6, 3)), DomainError);
}

TEST_CASE("general effective Hamiltonian reduces to the resonant one on resonance") {
    for (const auto& [k1, k2, br] : {std::tuple{0, 0, Branch::Plus}, std::tuple{0, 1, Branch::Minus},
                                     std::tuple{1, 2, Branch::Plus}}) {
        const ResonantFamily f = resonant_family(k1, k2, br);
        const ModelParams p = f.params(50.0, 0.5);
        const auto b = sector(8, 4);
        const HamiltonianMatrix g = build_effective_general(p, b);
        const HamiltonianMatrix r = build_effective_resonant(p, f, b);
        CHECK(max_entry_difference(g.entries, r.entries) < 1e-12);
        CHECK(g.dense().diagonal().cwiseAbs().maxCoeff() < 1e-9);
        CHECK(r.hermiticity_defect() == 0.0);
        CHECK(chiral_anticommutator_norm(r) == 0.0);
        const Eigen::MatrixXcd d = r.dense();
        CHECK(d.diagonal().cwiseAbs().maxCoeff() == 0.0);
        CHECK(d.real().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("general effective Hamiltonian off resonance") {
    const ModelParams p = make(100.0, 50.0, 0.5, 50.0 / std::numbers::sqrt2);
    const HamiltonianMatrix g = build_effective_general(p, sector(6, 3));
    CHECK(g.hermiticity_defect() == 0.0);
    CHECK(g.dense().diagonal().cwiseAbs().maxCoeff() > 1.0);
    CHECK(chiral_anticommutator_norm(g) > 1e-3);

    // Every barrier an even multiple of omega and no drive: no hopping survives.
    const ModelParams even = make(40.0, 20.0, 0.0, 10.0);  // barriers -20, 20, 60
    const Eigen::MatrixXcd d = build_effective_general(even, sector(6, 3)).dense();
    Eigen::MatrixXcd off = d;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("resonant matrix elements between Fock states") {
    const ModelParams p = resonant_default();
    const ResonantFamily f = resonant_family(0, 0, Branch::Plus);
    const ResonantAmplitudes a = resonant_amplitudes(p, f);
    const auto b = sector(6, 3);
    const Eigen::MatrixXcd d = build_effective_resonant(p, f, b).dense();
    for (std::size_t i = 0; i < b->size(); ++i)
        for (std::size_t j = 0; j < b->size(); ++j)
            CHECK(resonant_element(b->state(i), b->state(j), a) ==
                  d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    // Rightward hop carries +i A.
    CHECK(resonant_element(fs("110100"), fs("111000"), a) == Complex(0, a.a3));
}

TEST_CASE("parameter validation") {
    ModelParams p = resonant_default();
    CHECK_NOTHROW(p.validate());
    p.omega = 0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = resonant_default();
    p.u = -0.1;
    CHECK_THROWS_AS(p.validate(), DomainError);
    CHECK(parse_barrier_class("g+U") == BarrierClass::GPlusU);
    CHECK(to_string(BarrierClass::GMinusU) == "g-U");
    CHECK_THROWS_AS((void)parse_barrier_class("x"), DomainError);
}
}
