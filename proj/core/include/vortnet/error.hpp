#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vortnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A field or table file does not follow its documented layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

class MalformedHeaderError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Payload length disagrees with the declared grid.
class DimensionMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

class NonFiniteValueError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Dense materialization refused because it would exceed the memory cap.
class CapacityExceededError : public Error {
 public:
  CapacityExceededError(const std::string& what, std::size_t required,
                        std::size_t cap)
      : Error(what), required_bytes(required), cap_bytes(cap) {}
  std::size_t required_bytes;
  std::size_t cap_bytes;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t pair,
                   std::size_t iterations, double residual)
      : Error(what), pair_index(pair), iterations(iterations),
        last_residual(residual) {}
  std::size_t pair_index;
  std::size_t iterations;
  double last_residual;
};

/// Every eigenvalue of the sampled block fell below the pseudo-inverse cutoff.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

}  // namespace vortnet
