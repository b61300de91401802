#pragma once

#include <stdexcept>
#include <string>

namespace monodromy {

// Base of every error thrown by the library.  The CLI maps the category onto
// its exit code, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class SingularJetError : public Error {
 public:
  using Error::Error;
};

class BranchAmbiguityError : public Error {
 public:
  using Error::Error;
};

class CriticalPointError : public Error {
 public:
  using Error::Error;
};

// Integration contour passes too close to a singularity of the field.
class ContourError : public Error {
 public:
  using Error::Error;
};

// Step size underflow or step budget exhausted.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

class CapExceededError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedContextError : public Error {
 public:
  using Error::Error;
};

// z = v/u has a pole at the evaluation point.
class PoleOfZError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace monodromy
