// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace scarkit {

/// Precondition violated by the caller (bad sector, non-resonant parameters, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The request is well formed but exceeds what the configured solver can hold.
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace scarkit
