#pragma once

#include <stdexcept>
#include <string>

namespace circ {

/// Bad input: malformed configs, degenerate geometry, violated preconditions.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical breakdown: singular systems, non-convergent solves.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace circ
