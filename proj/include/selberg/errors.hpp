#pragma once

#include <stdexcept>
#include <string>

#include "selberg/config.hpp"

namespace selberg {

// Argument sits on a pole of the function being evaluated.
class pole_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Argument outside the function's domain (|q| >= 1, Im tau <= 0, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A finite mathematical value exceeded the range of Real.
class overflow_error : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// An engine detected that its integrand does not decay as required.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Complex checked(const Complex& z, const char* what) {
  if (!is_finite(z)) throw overflow_error(std::string(what) + ": result is not finite");
  return z;
}

}  // namespace detail
}  // namespace selberg
