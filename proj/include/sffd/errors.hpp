#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sffd {

// Base for every error the engine raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at position " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Evaluation left the domain of a node (division by zero, ln of a
// non-positive value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DegenerateFrameError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

// A bilinear form that should be symmetric is not; with a torsionful
// connection use the obstruction path instead.
class AsymmetricFormError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(int step, const std::string& message)
      : Error("integration failed at step " + std::to_string(step) + ": " + message), step_(step) {}

  int step() const noexcept { return step_; }

 private:
  int step_;
};

class NotIntegrableError : public Error {
 public:
  using Error::Error;
};

class NotInDistributionError : public Error {
 public:
  using Error::Error;
};

class TorsionfulConnectionError : public Error {
 public:
  using Error::Error;
};

class InvalidSetupError : public Error {
 public:
  using Error::Error;
};

}  // namespace sffd
