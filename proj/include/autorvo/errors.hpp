#pragma once

#include <stdexcept>
#include <string>

namespace autorvo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario / reference input.
class ParseError : public Error {
 public:
  using Error::Error;
};
class ValidationError : public Error {
 public:
  using Error::Error;
};
class IdMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Geometry / dynamics / navigation.
class ViewpointInsideShape : public Error {
 public:
  using Error::Error;
};
class InvalidControl : public Error {
 public:
  using Error::Error;
};
class EmptyRange : public Error {
 public:
  using Error::Error;
};
class NoCandidate : public Error {
 public:
  using Error::Error;
};

// Evaluation.
class InsufficientData : public Error {
 public:
  using Error::Error;
};
class DegenerateCovariance : public Error {
 public:
  using Error::Error;
};

}  // namespace autorvo
