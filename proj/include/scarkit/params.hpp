// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>

namespace scarkit {

/// Parameters of the square-wave driven tilted chain.  Energies in units of J (hbar = 1).
struct ModelParams {
    double J = 1.0;       ///< tunneling
    double U = 0.0;       ///< nearest-neighbour interaction
    double g = 0.0;       ///< tilt
    double u = 0.0;       ///< drive amplitude, dimensionless
    double omega = 1.0;   ///< drive angular frequency

    [[nodiscard]] double period() const noexcept { return 2.0 * std::numbers::pi / omega; }

    /// Throws DomainError unless J, g, omega > 0 and U, u >= 0.
    void validate() const;
};

}  // namespace scarkit
