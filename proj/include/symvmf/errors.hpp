#pragma once

#include <stdexcept>
#include <string>

namespace symvmf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rodrigues vector undefined: rotation angle at or numerically near pi.
struct NearPiRotation : Error {
  using Error::Error;
};

struct UnknownGroup : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct GroupAxiomViolation : Error {
  using Error::Error;
};

// Resultant vector too short to define a mean direction.
struct DegenerateResultant : Error {
  using Error::Error;
};

struct ResultantOutOfRange : Error {
  using Error::Error;
};

struct NonFiniteLikelihood : Error {
  using Error::Error;
};

struct NoZoneFound : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace symvmf
