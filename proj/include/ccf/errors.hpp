#pragma once

#include <stdexcept>
#include <string>

namespace ccf {

// Operands live on incompatible grids or have the wrong extent.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Arguments are individually valid but the requested combination is not.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Parameter outside the domain of a closed form.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// The kernel has no closed-form inverse or moment table for this operation.
struct UnsupportedKernel : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A file could not be read or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ccf
