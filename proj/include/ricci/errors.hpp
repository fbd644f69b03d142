#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph / target input. Carries the 1-based line when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Structurally invalid graph or weights (disconnected, self-loop, duplicate
// edge, non-positive weight, length mismatch).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An operation restricted to girth >= 6 was called on a graph with a
// 3-, 4- or 5-cycle.
class GirthError : public Error {
 public:
  using Error::Error;
};

// The simplex solver could not produce a trustworthy answer.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// Brute-force enumeration refused because the graph is too large.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Newton iteration for constant-curvature weights did not reach a minimizer.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

// Prescribed curvature violates the total-curvature constraint.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace ricci
