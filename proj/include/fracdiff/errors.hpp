#pragma once

#include <stdexcept>
#include <string>

namespace fracdiff {

// Raised when a computation (not its inputs) goes bad: oracle non-convergence,
// diverging affine coefficient, failed noise calibration. CLI maps this to
// exit code 2, input/config problems to exit code 1.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracdiff
