#pragma once

#include <stdexcept>
#include <string>

namespace selfconf {

// Base for everything the library throws on a contract violation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed parameters or scenario fields. The message names the field.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Coincident nodes where a path-loss term needs a positive distance.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

// SINR requirement cannot be met (at l_th for the bounds, or by a lone
// dipole for the scheduler).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration refused because the dipole count exceeds the cap.
class OracleCapError : public Error {
 public:
  using Error::Error;
};

// A metric that has no value for the given input (zero-energy optimum,
// no active dipoles).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

// A node view older than one sweep was used for a local update.
class StaleViewError : public Error {
 public:
  using Error::Error;
};

}  // namespace selfconf
