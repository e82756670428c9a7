#pragma once

#include <stdexcept>
#include <string>

namespace scatcoef {

// Bad input or violated precondition. CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure inside a solver. CLI exit code 2.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResonanceError : public SolverError {
 public:
  ResonanceError(const std::string& what, int mode) : SolverError(what), mode_(mode) {}
  int mode() const { return mode_; }

 private:
  int mode_;
};

// Parameter fit that lacks enough data (e.g. truncation selection).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scatcoef
