#pragma once

#include <stdexcept>
#include <string>

namespace risdmac {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Two scenario points coincide, so a path length is zero.
class DegenerateGeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Series, continued fraction or quadrature failed to converge, or a
// computed probability escaped [0, 1] beyond rounding.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved_error = 0.0)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

// Config file could not be parsed; line() is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, unsigned long line)
      : std::runtime_error(what), line_(line) {}

  unsigned long line() const noexcept { return line_; }

 private:
  unsigned long line_;
};

// A configuration value violates an invariant; key() names it.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace risdmac
