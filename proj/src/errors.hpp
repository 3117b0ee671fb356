// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#pragma once

#include <stdexcept>
#include <string>

namespace nearfocus {

// Invalid scenario input: bad dimensions, out-of-range parameters, malformed config.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure: singular combining basis, failed eigendecomposition,
// degenerate spectra. Distinct from ConfigError so callers can map exit codes.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nearfocus
