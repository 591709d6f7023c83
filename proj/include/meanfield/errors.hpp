#pragma once

#include <stdexcept>

namespace meanfield {

/// Argument outside a documented domain (CLI exit code 1).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical failure: quadrature or an iteration missed its target (exit 2).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem size beyond an exact solver's capacity (exit 2).
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation precondition or an input invariant.
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace meanfield
