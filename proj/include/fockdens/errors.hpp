#pragma once

#include <stdexcept>
#include <string>

namespace fockdens {

/// Bad input: shape mismatches, malformed scenes, violated preconditions.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine could not deliver a trustworthy answer
/// (singular pencil, quadrature guard, vanishing gradient).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fockdens
