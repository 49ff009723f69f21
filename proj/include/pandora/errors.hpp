#pragma once

#include <stdexcept>
#include <string>

namespace pandora {

// Raised when an argument or configuration violates a model precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Root finding failed to bracket or converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A single agent's search hit its step cap.
class StepCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pandora
