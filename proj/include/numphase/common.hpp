#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace numphase {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Library-wide defaults; every CLI command can override them.
inline constexpr int kDefaultFockDim = 64;
inline constexpr int kDefaultGrid = 2048;
inline constexpr double kDefaultSectionTol = 1e-7;

// Error taxonomy. The CLI maps these onto its exit codes:
// validation errors -> 2, I/O errors -> 3, numerical-consistency errors -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class InvalidInputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SingularMatrixError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OutOfWindowError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidPartitionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class BoundInapplicableError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NumericalConsistencyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Angle reduced to [0, 2*pi).
inline double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;  // fmod can round up to 2*pi
  return w;
}

// Arc distance on the circle, d(a,b) = min_n |a - b - 2*pi*n|, values in [0, pi].
inline double arc_distance(double a, double b) {
  return std::abs(std::remainder(a - b, kTwoPi));
}

}  // namespace numphase
