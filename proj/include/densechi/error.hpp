#pragma once

#include <stdexcept>
#include <string>

namespace densechi {

// Invalid argument to a library operation (maps to CLI exit code 2).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exact solver gave up instead of returning a possibly non-optimal answer
// (maps to CLI exit code 3).
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The complement contains a K4, so colour classes are not restricted to
// triangles, edges and singletons and the packing formulation is invalid.
class K4Present : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ParameterError(message);
}

}  // namespace densechi
