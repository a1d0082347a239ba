#pragma once

#include <stdexcept>

namespace rifci {

// Input data violates a structural invariant (bad CSV, unknown ids, singular D).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical procedure failed: non-convergence, zero iterate, exhausted
// bootstrap redraw budget.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rifci
