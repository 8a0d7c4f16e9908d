#pragma once

#include <stdexcept>
#include <string>

namespace wavectl {

// Malformed expression text. `column` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int column)
      : std::runtime_error(msg + " (column " + std::to_string(column) + ")"),
        column_(column) {}
  int column() const { return column_; }

 private:
  int column_ = 0;
};

// Evaluation outside a function's domain, bad sample tables, and similar
// data-shape problems.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// API misuse that the caller could have avoided (wrong period on a null
// velocity, mismatched coefficient tables, ...).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The problem data fails a mathematical precondition of the construction.
// These are expected rejections, not bugs; the CLI maps them to exit code 2
// and records `reason()` in the output manifest.
class AdmissibilityError : public std::runtime_error {
 public:
  AdmissibilityError(std::string reason, const std::string& msg)
      : std::runtime_error(msg), reason_(std::move(reason)) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

class IrrationalRatioError : public AdmissibilityError {
 public:
  explicit IrrationalRatioError(const std::string& msg)
      : AdmissibilityError("irrational-ratio", msg) {}
};

// Integer ratio: the terminal state is constrained, not free. Carries the
// obstruction residual of the attempted target so callers can report how far
// the data is from the reachable set.
class ResonantRatioError : public AdmissibilityError {
 public:
  ResonantRatioError(const std::string& msg, double residual)
      : AdmissibilityError("resonance-obstruction", msg), residual_(residual) {}
  double obstruction_residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

class TailNotConvergedError : public AdmissibilityError {
 public:
  explicit TailNotConvergedError(const std::string& msg)
      : AdmissibilityError("tail-not-converged", msg) {}
};

class CompatibilityError : public AdmissibilityError {
 public:
  explicit CompatibilityError(const std::string& msg)
      : AdmissibilityError("compatibility-failed", msg) {}
};

class OrderingViolatedError : public AdmissibilityError {
 public:
  explicit OrderingViolatedError(const std::string& msg)
      : AdmissibilityError("ordering-violated", msg) {}
};

class NonnegConditionError : public AdmissibilityError {
 public:
  explicit NonnegConditionError(const std::string& msg)
      : AdmissibilityError("nonneg-condition-failed", msg) {}
};

class NoNonnegativeSeedError : public AdmissibilityError {
 public:
  explicit NoNonnegativeSeedError(const std::string& msg)
      : AdmissibilityError("no-nonnegative-seed", msg) {}
};

// Internal consistency failure: never expected when the admissibility checks
// above have passed. Treated as a bug, not a rejection.
class PositivityLostError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wavectl
