#ifndef FRACLAP_ERRORS_HPP
#define FRACLAP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fraclap {

// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid problem parameters or configuration (user input, not numerics).
class ParamError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Geometry / domain violations.
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

class CoincidentPointsError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// Numerical failure modes.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class SlowDecayError : public Error {
 public:
  using Error::Error;
};

class TooCloseToBoundaryError : public Error {
 public:
  using Error::Error;
};

class NonIntegrableError : public Error {
 public:
  using Error::Error;
};

class DivergentError : public Error {
 public:
  using Error::Error;
};

class NonContractiveError : public Error {
 public:
  using Error::Error;
};

class MaxIterationsError : public Error {
 public:
  using Error::Error;
};

// Expression-language errors carry the source position (0-based offset).
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position, std::string expected = {})
      : Error(msg + " (at position " + std::to_string(position) +
              (expected.empty() ? "" : ", expected " + expected) + ")"),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownIdentifierError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace fraclap

#endif  // FRACLAP_ERRORS_HPP
