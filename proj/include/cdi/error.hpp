#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A structural invariant (graph, perturbation vector, ...) does not hold.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Eigen-solver failed to meet its backward-error bound.
class SpectralError : public Error {
 public:
  SpectralError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class OptimizerError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdi
