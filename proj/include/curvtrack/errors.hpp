#pragma once

#include <stdexcept>
#include <string>

namespace curvtrack {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physics-level failures: the requested quantity does not exist at the input.
class PhysicsError : public Error {
 public:
  using Error::Error;
};

class InvalidState : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class DegeneratePoint : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class GeometricSingularity : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class UndefinedChern : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class GaugeDiscontinuity : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class StepTooLarge : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class IncompleteSweep : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

/// Argument outside an operation's documented domain (programming error).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace curvtrack
