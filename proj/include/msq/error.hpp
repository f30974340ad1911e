#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace msq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (odd grid size, G < 1, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical invariant failed at runtime (non-symplectic element, mode cap, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Three significant digits, for diagnostics.
inline std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

/// Structural tolerances used by invariant checks.
struct Tolerances {
  double structural = 1e-9;
  double exact = 1e-12;
  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

}  // namespace msq
