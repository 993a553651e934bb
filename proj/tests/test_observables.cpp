// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include <Eigen/SVD>

#include "scarkit/errors.hpp"
#include "scarkit/graph.hpp"
#include "scarkit/observables.hpp"

using namespace scarkit;

namespace {

FockState fs(const char* s) { return FockState::from_string(s); }

std::shared_ptr<const SectorBasis> sector(int L, int N) { return std::make_shared<const SectorBasis>(L, N); }

HamiltonianMatrix resonant(int L) {
    const ResonantFamily f = resonant_family(0, 0, Branch::Plus);
    return build_effective_resonant(f.params(50.0, 0.5), f, sector(L, L / 2));
}

// Entropy from the full 2^cut x 2^(L-cut) reshape, ignoring the number structure.
double reshape_entropy(const SectorBasis& b, const Eigen::VectorXcd& psi, int cut) {
    const int L = b.sites();
    const int right = L - cut;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Eigen::Index{1} << cut, Eigen::Index{1} << right);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Word w = b.words()[i];
        m(static_cast<Eigen::Index>(w >> right), static_cast<Eigen::Index>(w & ((Word{1} << right) - 1))) =
            psi(static_cast<Eigen::Index>(i));
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    double s = 0.0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        const double p = svd.singularValues()(k) * svd.singularValues()(k);
        if (p > 1e-14) s -= p * std::log(p);
    }
    return s;
}

Eigen::VectorXcd random_state(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return v / v.norm();
}

}  // namespace

TEST_SUITE("observables") {
TEST_CASE("entanglement of simple states") {
    const auto b = sector(4, 2);
    CHECK(entanglement_entropy(basis_state(b, fs("1100")), 2) == doctest::Approx(0.0));
    CHECK(entanglement_entropy(basis_state(b, fs("1010"))) == doctest::Approx(0.0));
    StateVector bell{b, Eigen::VectorXcd::Zero(6)};
    bell.amplitudes(static_cast<Eigen::Index>(*b->find(fs("1100")))) = 1 / std::sqrt(2.0);
    bell.amplitudes(static_cast<Eigen::Index>(*b->find(fs("0011")))) = 1 / std::sqrt(2.0);
    CHECK(entanglement_entropy(bell, 2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    StateVector loose = bell;
    loose.amplitudes *= 1.1;
    CHECK_THROWS_AS((void)entanglement_entropy(loose, 2), DomainError);
    CHECK_THROWS_AS(EntanglementCut(b, 0), DomainError);
    CHECK_THROWS_AS(EntanglementCut(b, 4), DomainError);
}

TEST_CASE("block entropy equals the full reshape") {
    std::mt19937_64 rng(11);
    for (int L = 2; L <= 10; ++L) {
        for (int N : {L / 2, L / 3 + 1}) {
            if (N > L) continue;
            const auto b = sector(L, N);
            for (int cut = 1; cut < L; ++cut) {
                const EntanglementCut ec(b, cut);
                for (int trial = 0; trial < 2; ++trial) {
                    const Eigen::VectorXcd psi = random_state(static_cast<Eigen::Index>(b->size()), rng);
                    CHECK(ec.entropy(psi) == doctest::Approx(reshape_entropy(*b, psi, cut)).epsilon(1e-10));
                }
            }
        }
    }
}

TEST_CASE("reference values") {
    CHECK(page_value(16) == doctest::Approx(5.0452).epsilon(1e-4));
    CHECK(coe_ie_reference(12870) == doctest::Approx(8.729).epsilon(1e-3));
    for (int L = 4; L < 20; L += 2) CHECK(page_value(L + 2) > page_value(L));
    CHECK(coe_ie_reference(100) > coe_ie_reference(99));
}

TEST_CASE("Shannon entropy") {
    const auto b = sector(6, 3);
    CHECK(shannon_entropy(basis_state(b, fs("101010"))) == 0.0);
    const Eigen::VectorXcd flat = Eigen::VectorXcd::Constant(20, 1.0 / std::sqrt(20.0));
    CHECK(shannon_entropy(flat) == doctest::Approx(std::log(20.0)).epsilon(1e-12));
}

TEST_CASE("kernel projection and the scar state") {
    const HamiltonianMatrix h = resonant(8);
    const RealGaugeSpectrum chiral = diagonalize_chiral(h);
    const ComplexSpectrum generic = diagonalize(h);
    const FockState tp = domain_wall_state(8, 4);
    const double p0 = zero_projection(chiral, tp);
    CHECK(p0 > 0.5);
    CHECK(p0 <= 1.0);
    CHECK(zero_projection(generic, tp) == doctest::Approx(p0).epsilon(1e-10));

    const StateVector s0 = scar_state(chiral, tp);
    const StateVector s1 = scar_state(generic, tp);
    CHECK(std::abs(s0.norm() - 1.0) < 1e-12);
    const auto n0 = static_cast<Eigen::Index>(*s0.basis->find(tp));
    CHECK(std::abs(s0.amplitudes(n0) - std::sqrt(p0)) < 1e-10);
    // Independent of the kernel basis returned by either solver.
    CHECK((s0.amplitudes - s1.amplitudes).norm() < 1e-10);
    const Eigen::VectorXcd hs = h.entries * s0.amplitudes;
    CHECK(hs.norm() < 1e-9 * h.dense().norm());

    const RealGaugeSpectrum odd = diagonalize_chiral(resonant(6));
    CHECK(zero_projection(odd, domain_wall_state(6, 3)) == 0.0);
    CHECK_THROWS_AS((void)scar_state(odd, domain_wall_state(6, 3)), DomainError);
}

TEST_CASE("overlap tables") {
    const RealGaugeSpectrum s = diagonalize_chiral(resonant(8));
    for (const char* bits : {"11110000", "10101010", "11001100"}) {
        const FockState f = fs(bits);
        const auto rows = overlap_table(s, f);
        double total = 0.0;
        for (const OverlapRow& r : rows) total += r.weight;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

        const auto agg = overlap_table(s, f, true);
        double agg_total = 0.0;
        std::size_t zero_rows = 0;
        for (const OverlapRow& r : agg) {
            agg_total += r.weight;
            zero_rows += r.quasienergy == 0.0;
        }
        CHECK(agg_total == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(zero_rows == 1);
        // Chiral pairing of the aggregated weights.
        for (std::size_t i = 0; i < agg.size(); ++i) {
            const OverlapRow& mirror = agg[agg.size() - 1 - i];
            CHECK(std::abs(agg[i].quasienergy + mirror.quasienergy) < 1e-10);
            CHECK(std::abs(agg[i].weight - mirror.weight) < 1e-10);
        }
        CHECK(std::abs(agg[agg.size() / 2].weight - zero_projection(s, f)) < 1e-12);
    }
}

TEST_CASE("band statistics") {
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 2, 3}) == 2.5);
    Eigen::VectorXd v(9);
    v << 1.0, 1.1, 0.9, 1.05, 0.95, 1.0, 1.02, -5.0, 0.98;
    const auto out = low_outliers(v, 3.0);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == 7);
    CHECK(low_outliers(v, 3.0, {7}).empty());

    const RealGaugeSpectrum s = diagonalize_chiral(resonant(8));
    Eigen::VectorXd rank(s.dimension());
    for (Eigen::Index a = 0; a < rank.size(); ++a) rank(a) = static_cast<double>(a);
    // 32 levels sit below the kernel and 32 above; the central 13 are ranks 25..31 and 38..43.
    CHECK(central_band_median(s, rank, 0.2) == 31.0);
}

TEST_CASE("scar summary") {
    const RealGaugeSpectrum s = diagonalize_chiral(resonant(8));
    const ScarSummary sum = scar_summary(s, domain_wall_state(8, 4));
    CHECK(sum.overlap == doctest::Approx(sum.p0).epsilon(1e-10));
    CHECK(sum.page == doctest::Approx(page_value(8)));
    CHECK(sum.coe_ie == doctest::Approx(std::log(0.48 * 70)));
    CHECK(sum.entanglement >= 0.0);
    CHECK(sum.shannon < sum.coe_ie);
}
}
