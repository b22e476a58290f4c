#pragma once

#include <stdexcept>
#include <string>

namespace tvgl {

/// Bad inputs: malformed files, inconsistent dimensions, invalid parameters.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical breakdown at runtime: non-finite iterates, failed factorizations.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tvgl
