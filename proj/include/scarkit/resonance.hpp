// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file resonance.hpp
 * @brief Resonance conditions of the three driven tunneling processes.
 *
 * A hop across barrier |Delta| is resonant when |Delta| is 0 or an odd
 * multiple of omega.  The full resonance families put all three barriers
 * |g-U|, g and g+U on resonance simultaneously.
 */

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "scarkit/params.hpp"

namespace scarkit {

enum class Branch { Plus, Minus };

[[nodiscard]] std::string to_string(Branch b);
/// Accepts "+", "plus", "-", "minus".
[[nodiscard]] Branch parse_branch(const std::string& text);

struct ResonantFamily {
    int k1 = 0;
    int k2 = 0;
    Branch branch = Branch::Plus;
    int g_over_omega = 1;  ///< 2 k2 + 1
    int k3 = 0;            ///< (1 + U/g) g = (2 k3 + 1) omega

    /// U/g as the exact ratio numerator / denominator.
    [[nodiscard]] int u_over_g_numerator() const noexcept;
    [[nodiscard]] int u_over_g_denominator() const noexcept { return g_over_omega; }
    [[nodiscard]] double u_over_g() const noexcept {
        return static_cast<double>(u_over_g_numerator()) / u_over_g_denominator();
    }

    /// Model parameters on this family at tilt g and drive amplitude u (J = 1).
    [[nodiscard]] ModelParams params(double g, double u, double J = 1.0) const;
};

inline constexpr double kResonanceTolerance = 1e-9;

/// |delta| within relative 1e-9 of 0 or of an odd multiple of omega.
[[nodiscard]] bool is_resonant(double delta, double omega);

/// Throws DomainError for negative k or for the minus branch with k2 <= k1.
[[nodiscard]] ResonantFamily resonant_family(int k1, int k2, Branch branch);

/// Recover (k1, k2, branch) from raw parameters, if they satisfy full resonance to relative 1e-12.
[[nodiscard]] std::optional<ResonantFamily> detect_family(const ModelParams& p);

/// True if p lies on `family` to relative tolerance 1e-12.
[[nodiscard]] bool satisfies_family(const ModelParams& p, const ResonantFamily& family);

/**
 * |J_i / dE_i| for the |g-U|, g and g+U processes.  dE_i is the barrier
 * folded into the Floquet zone.  Where it vanishes while J_i stays finite the
 * ratio diverges: `divergent[i]` is set and `ratio[i]` holds the unfolded
 * |J_i / Delta_i| (infinite for Delta = 0).  At even multiples of omega both
 * vanish and the analytic limit J / |Delta| is reported.
 */
struct AmplitudeRatio {
    std::array<double, 3> ratio{};
    std::array<bool, 3> divergent{};
};

[[nodiscard]] AmplitudeRatio amplitude_ratio(const ModelParams& p);

struct RatioRow {
    double U = 0;
    double g = 0;
    AmplitudeRatio r;
};

struct AxisRange {
    double lo = 0;
    double hi = 0;
    int steps = 1;   ///< number of samples including both ends; 1 means just lo

    [[nodiscard]] double at(int i) const noexcept {
        return steps <= 1 ? lo : lo + i * ((hi - lo) / (steps - 1));
    }
};

/// Rows ordered U-major, g-minor.
[[nodiscard]] std::vector<RatioRow> scan_ratio_grid(const AxisRange& U, const AxisRange& g, double omega,
                                                    double u, double J = 1.0);

}  // namespace scarkit
