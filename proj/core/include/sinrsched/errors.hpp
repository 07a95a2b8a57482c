#pragma once

#include <stdexcept>
#include <string>

namespace sinrsched {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input: bad parameters, unknown ids, violated preconditions, or an
// instance too large for an exact oracle.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A computed object failed its own post-verification (e.g. a partition needed
// more parts than its bound, or a schedule slot failed re-verification).
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace sinrsched
