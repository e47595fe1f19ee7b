#pragma once

#include <stdexcept>
#include <string>

namespace optauction {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or incomplete input: missing table entries, shape mismatches,
// out-of-range indices.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A value outside its mathematical domain (alpha outside [0,1], masses that
// do not sum to one, non-increasing supports).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An operation was called on an object that does not satisfy its
// precondition (e.g. slackness checks on a non-optimal LP solution).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An oracle relation that was expected to hold does not.
class CertificationError : public Error {
 public:
  using Error::Error;
};

// An exact oracle refused an instance that exceeds its configured size cap.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

// An internal invariant was breached; always a bug in this library.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace optauction
