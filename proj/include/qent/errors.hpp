#pragma once

#include <stdexcept>
#include <string>

namespace qent {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Qubit indices out of range, repeated, or otherwise unusable.
struct BadTargets : Error {
  using Error::Error;
};

struct NonUnitary : Error {
  using Error::Error;
};

struct NotHermitian : Error {
  using Error::Error;
};

struct ShapeMismatch : Error {
  using Error::Error;
};

struct BadDim : Error {
  using Error::Error;
};

struct BadArity : Error {
  using Error::Error;
};

struct Unnormalized : Error {
  using Error::Error;
};

struct ArityMismatch : Error {
  using Error::Error;
};

struct ZeroVector : Error {
  using Error::Error;
};

// Reshaped resource state is not unitary across the requested pairing.
struct NotAGateResource : Error {
  using Error::Error;
};

struct NotFound : Error {
  using Error::Error;
};

struct NoCorrectionExists : Error {
  using Error::Error;
};

// Numbers went non-finite or a post-condition failed numerically.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace qent
