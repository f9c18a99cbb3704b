#pragma once

#include <stdexcept>
#include <string>

namespace infodiv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input is not a valid point on the simplex (negative entry, bad mass, NaN).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The requested divergence has no spectral kernel (Hellinger).
class UnsupportedKernel : public Error {
 public:
  using Error::Error;
};

/// Parameters are out of range or the configuration would exceed a resource guard.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// An aggregate stream delivered the same (point, coordinate) twice.
class DuplicateCoordinateError : public Error {
 public:
  using Error::Error;
};

/// Two sketches or embeddings were built with different parameters.
class SketchMismatchError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace infodiv
