#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hhg {

/// Compact %g rendering of a number for error messages.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Base of every error the library raises. `kind()` is a stable, machine-readable tag.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view kind() const noexcept { return "Error"; }
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "InvalidArgument"; }
};

/// A matrix, derivative or sample turned non-finite.
class NonFiniteError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "NonFinite"; }
};

/// Generalized norm left the configured guard band during propagation.
class NormDrift : public Error {
 public:
  NormDrift(const std::string& what, double t_cycles, double norm)
      : Error(what), t_cycles_(t_cycles), norm_(norm) {}
  std::string_view kind() const noexcept override { return "NormDrift"; }
  double t_cycles() const noexcept { return t_cycles_; }
  double norm() const noexcept { return norm_; }

 private:
  double t_cycles_;
  double norm_;
};

/// The adaptive integrator could not make progress (step size collapse or step budget exhausted).
class StepUnderflow : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "StepUnderflow"; }
};

/// Photon-number cutoff of the Fock oracle is too small for the state.
class TailOverflow : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "TailOverflow"; }
};

/// Spectrum has fewer than three harmonic peaks.
class NoPlateau : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "NoPlateau"; }
};

/// An internal identity that should hold to rounding failed (e.g. a Hermitian form came out complex).
class ConsistencyError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "Inconsistent"; }
};

class NonUniformSeries : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "NonUniformSeries"; }
};

}  // namespace hhg
