// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "scarkit/resonance.hpp"

#include <cmath>
#include <limits>

#include "scarkit/errors.hpp"
#include "scarkit/hamiltonian.hpp"
#include "scarkit/spectral.hpp"

namespace scarkit {

namespace {

constexpr double kFamilyTolerance = 1e-12;

bool near(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); }

// Nearest odd integer to x >= 0.
double nearest_odd(double x) { return 2.0 * std::round((x - 1.0) / 2.0) + 1.0; }

}  // namespace

std::string to_string(Branch b) { return b == Branch::Plus ? "+" : "-"; }

Branch parse_branch(const std::string& text) {
    if (text == "+" || text == "plus" || text == "p") return Branch::Plus;
    if (text == "-" || text == "minus" || text == "m") return Branch::Minus;
    throw DomainError("unknown branch '" + text + "' (expected + or -)");
}

int ResonantFamily::u_over_g_numerator() const noexcept {
    return branch == Branch::Plus ? g_over_omega + (2 * k1 + 1) : g_over_omega - (2 * k1 + 1);
}

ModelParams ResonantFamily::params(double g, double u, double J) const {
    ModelParams p;
    p.J = J;
    p.g = g;
    p.u = u;
    p.U = g * static_cast<double>(u_over_g_numerator()) / static_cast<double>(u_over_g_denominator());
    p.omega = g / static_cast<double>(g_over_omega);
    return p;
}

bool is_resonant(double delta, double omega) {
    if (!(omega > 0)) throw DomainError("omega must be positive");
    const double x = std::abs(delta) / omega;
    if (x <= kResonanceTolerance) return true;
    const double odd = nearest_odd(x);
    return std::abs(x - odd) <= kResonanceTolerance * odd;
}

ResonantFamily resonant_family(int k1, int k2, Branch branch) {
    if (k1 < 0 || k2 < 0) throw DomainError("k1 and k2 must be non-negative");
    if (branch == Branch::Minus && k2 <= k1) throw DomainError("the minus branch needs k2 > k1");
    ResonantFamily f;
    f.k1 = k1;
    f.k2 = k2;
    f.branch = branch;
    f.g_over_omega = 2 * k2 + 1;
    f.k3 = branch == Branch::Plus ? 2 * k2 + k1 + 1 : 2 * k2 - k1;
    return f;
}

bool satisfies_family(const ModelParams& p, const ResonantFamily& family) {
    if (!(p.g > 0) || !(p.omega > 0)) return false;
    const double a = family.u_over_g();
    return near(p.g, family.g_over_omega * p.omega, kFamilyTolerance) && near(p.U, a * p.g, kFamilyTolerance);
}

std::optional<ResonantFamily> detect_family(const ModelParams& p) {
    if (!(p.g > 0) || !(p.omega > 0) || !(p.U > 0)) return std::nullopt;
    const double q = p.g / p.omega;
    const double odd = nearest_odd(q);
    if (odd < 1 || !near(q, odd, kFamilyTolerance)) return std::nullopt;
    const int k2 = static_cast<int>((odd - 1) / 2);
    const double a = p.U / p.g;
    const double m = std::abs(1.0 - a) * odd;
    const double m_odd = nearest_odd(m);
    if (m_odd < 1 || !near(m, m_odd, kFamilyTolerance)) return std::nullopt;
    const int k1 = static_cast<int>((m_odd - 1) / 2);
    const Branch branch = a > 1 ? Branch::Plus : Branch::Minus;
    if (branch == Branch::Minus && k2 <= k1) return std::nullopt;
    ResonantFamily f = resonant_family(k1, k2, branch);
    if (!satisfies_family(p, f)) return std::nullopt;
    return f;
}

AmplitudeRatio amplitude_ratio(const ModelParams& p) {
    const FirstOrderAmplitudes amps = amplitudes_general(p);
    const std::array<double, 3> barriers{p.g - p.U, p.g, p.g + p.U};
    const double zero = 1e-12 * p.omega;
    AmplitudeRatio out;
    for (int i = 0; i < 3; ++i) {
        const double bar = std::abs(barriers[static_cast<std::size_t>(i)]);
        const double j = std::abs(amps[kAllBarrierClasses[static_cast<std::size_t>(i)]]);
        const double folded = std::abs(fold(bar, p.omega));
        auto& r = out.ratio[static_cast<std::size_t>(i)];
        if (folded >= zero) {
            r = j / folded;
            continue;
        }
        if (is_resonant(bar, p.omega)) {
            out.divergent[static_cast<std::size_t>(i)] = true;
            r = bar > 0 ? j / bar : std::numeric_limits<double>::infinity();
        } else {
            // Even multiple of omega: amplitude and folded barrier vanish together.
            r = p.J / bar;
        }
    }
    return out;
}

std::vector<RatioRow> scan_ratio_grid(const AxisRange& U, const AxisRange& g, double omega, double u, double J) {
    if (U.steps < 1 || g.steps < 1) throw DomainError("grid axes need at least one sample");
    std::vector<RatioRow> rows;
    rows.reserve(static_cast<std::size_t>(U.steps) * static_cast<std::size_t>(g.steps));
    for (int i = 0; i < U.steps; ++i) {
        for (int k = 0; k < g.steps; ++k) {
            ModelParams p;
            p.J = J;
            p.U = U.at(i);
            p.g = g.at(k);
            p.u = u;
            p.omega = omega;
            p.validate();
            rows.push_back({p.U, p.g, amplitude_ratio(p)});
        }
    }
    return rows;
}

}  // namespace scarkit
