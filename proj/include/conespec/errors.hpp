#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace conespec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user-supplied value (m = 0, even link dimension, t <= 0, ...).
struct InvalidParameter : Error {
  using Error::Error;
};

// A supplied link/potential violates its structural invariants
// (d~^2 != 0, adjointness defect, harmonic count mismatch, ...).
struct ModelInconsistency : Error {
  using Error::Error;
};

// Dimension mismatches and other internal wiring failures while
// building operator matrices.
struct AssemblyError : Error {
  using Error::Error;
};

// Eigensolver non-convergence and similar runtime numerics failures.
struct NumericalFailure : Error {
  using Error::Error;
};

// An analytic oracle was asked for outside its domain of validity.
struct UnsupportedOracle : Error {
  using Error::Error;
};

// A reported quantity changed when a declared truncation (Fourier cutoff,
// grid size) was enlarged, so the truncated answer cannot be trusted.
struct TruncationInsufficient : Error {
  using Error::Error;
};

// Configuration parsing/validation; collects every error, not just the first.
struct ConfigError : Error {
  explicit ConfigError(std::vector<std::string> errs)
      : Error(join(errs)), errors(std::move(errs)) {}
  std::vector<std::string> errors;

 private:
  static std::string join(const std::vector<std::string>& errs) {
    std::string s;
    for (const auto& e : errs) {
      if (!s.empty()) s += "\n";
      s += e;
    }
    return s;
  }
};

}  // namespace conespec
