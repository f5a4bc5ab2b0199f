#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rydpulse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A single broken hardware or scheduling constraint.
struct Violation {
  std::string constraint; // e.g. "max_amplitude", "min_atom_distance"
  std::string message;

  friend bool operator==(const Violation &, const Violation &) = default;
};

/// Raised when an object does not satisfy device or structural constraints.
/// Carries the full violation list so callers can report it as data.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<Violation> violations);
  ValidationError(std::string constraint, std::string message);

  const std::vector<Violation> &violations() const noexcept { return violations_; }

private:
  std::vector<Violation> violations_;
};

/// Raised when the emulator cannot complete a run (size cap, leakage, ...).
class SimulationError : public Error {
public:
  using Error::Error;
};

} // namespace rydpulse
