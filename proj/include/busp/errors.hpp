#pragma once

#include <stdexcept>

namespace busp {

// A result did not fit in 64 bits. Never wrapped silently.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// The rho splitter gave up on a composite cofactor.
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace busp
