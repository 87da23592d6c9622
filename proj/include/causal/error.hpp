#ifndef CAUSAL_ERROR_HPP
#define CAUSAL_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace causal {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed DOT or CSV input. Position is 1-based.
class ParseError : public Error {
 public:
  // line 0 means "no location available".
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(line == 0 ? msg
                        : msg + " (line " + std::to_string(line) +
                              ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Graph validation failure: cycles, duplicate nodes, bad edge endpoints.
class GraphError : public Error {
 public:
  using Error::Error;
};

// Bad argument to an operation: unknown node/column, overlapping sets,
// out-of-range parameter.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: rank-deficient design, zero IV denominator.
class NumericError : public Error {
 public:
  using Error::Error;
};

// File system / stream failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// Estimator requested for an estimand kind it does not support.
class IncompatibleError : public Error {
 public:
  using Error::Error;
};

// Unrecognized estimator or refuter name.
class UnknownMethodError : public Error {
 public:
  using Error::Error;
};

}  // namespace causal

#endif
