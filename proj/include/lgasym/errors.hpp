#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lgasym {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

// log/sqrt of a negative, division by zero, overflow.
class DomainError : public Error {
public:
  using Error::Error;
};

// Non-finite samples or an exhausted evaluation budget.
class QuadratureError : public Error {
public:
  using Error::Error;
};

class DivergenceError : public QuadratureError {
public:
  using QuadratureError::QuadratureError;
};

// A hypothesis of the asymptotic theorems does not hold for the input.
class HypothesisFailed : public Error {
public:
  using Error::Error;
};

class AmbiguousSign : public HypothesisFailed {
public:
  using HypothesisFailed::HypothesisFailed;
};

class NotIntegrable : public HypothesisFailed {
public:
  using HypothesisFailed::HypothesisFailed;
};

class GronwallViolation : public Error {
public:
  using Error::Error;
};

class TailToleranceError : public Error {
public:
  using Error::Error;
};

class OracleError : public Error {
public:
  using Error::Error;
};

class FitError : public Error {
public:
  using Error::Error;
};

}  // namespace lgasym
