#pragma once

#include <stdexcept>
#include <string>

namespace netident {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed structure text.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Duplicate edge, node index out of range, duplicate excited/measured node,
// forbidden self-loop.
class StructureError : public Error {
 public:
  using Error::Error;
};

// Sampling kept producing an ill-conditioned I - G.
class SamplingError : public Error {
 public:
  using Error::Error;
};

// Non-finite input, non-square determinant, singular closed loop.
class NumericError : public Error {
 public:
  using Error::Error;
};

// |E^Delta| differs from n_B * n_C where equality is required.
class CardinalityError : public Error {
 public:
  using Error::Error;
};

class CapExceededError : public Error {
 public:
  using Error::Error;
};

// random_structure() cannot satisfy the requested cardinalities.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace netident
