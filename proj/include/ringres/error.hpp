#pragma once

#include <stdexcept>
#include <string>

namespace ringres {

// Base of every error raised by the library. The CLI maps subclasses to exit
// codes: input problems exit with 2, internal breaches abort with 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Raised when an exhaustive routine is asked to exceed its size guard.
class BoundError : public Error {
 public:
  using Error::Error;
};

// A model invariant was violated at runtime (e.g. two robots on one circle).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ringres
