#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frontsd {

/// Caller passed arguments that cannot be combined (length mismatch, bad ranges).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation was violated.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Input data is malformed (non-finite values, invalid seed sets).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown problem name or unsupported dimension.
class LookupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The simplex QP solver did not reach its KKT tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A backtracking search exhausted its halving budget.
class LineSearchFailure : public std::runtime_error {
 public:
  LineSearchFailure(const std::string& what, int halvings)
      : std::runtime_error(what), halvings_(halvings) {}
  int halvings() const noexcept { return halvings_; }

 private:
  int halvings_;
};

/// A persisted file does not follow its schema.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace frontsd
