// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tilegen {

// Error taxonomy. Each maps to a CLI exit class: usage errors are caught by
// the argument parser, numeric failures exit 3, format failures exit 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteDensity : Error {
  using Error::Error;
};
struct InvalidTable : Error {
  using Error::Error;
};
struct QuadratureFailure : Error {
  using Error::Error;
};
struct DegenerateDensity : Error {
  using Error::Error;
};
struct MemoryBudgetExceeded : Error {
  using Error::Error;
};
struct FormatError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct ParameterError : Error {
  using Error::Error;
};
struct InternalError : Error {
  using Error::Error;
};

}  // namespace tilegen
