#pragma once

#include <stdexcept>
#include <string>

namespace wifipain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrices or allocations whose shapes do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (CSV/JSON parse failures, unknown
/// home ids, invariant violations of values read from disk).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A solver could not produce a certified answer for the given instance.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace wifipain
