// errors.hpp — exception types shared across the library
//
// Invalid inputs are reported with std::invalid_argument; the types below
// distinguish numerical failures from filesystem failures so the CLI can map
// them to distinct exit codes.

#pragma once

#include <stdexcept>

namespace largespin {

// Quadrature non-convergence, non-finite state during integration, degenerate
// parameter points, and similar runtime numerical failures.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File read/write failures.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace largespin
