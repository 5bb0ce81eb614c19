#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cerom {

/// Invalid user input: bad config values, out-of-range ranks, unknown kinds.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not produce a finite, well-defined result.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Time-stepping failure tied to a specific step (singular system, NaN, blow-up).
class StepError : public NumericalError {
public:
  StepError(const std::string &what, std::size_t step)
      : NumericalError(what + " at step " + std::to_string(step)), step_(step) {}
  std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

/// Snapshot container I/O and validation failures.
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class BadMagicError : public FormatError {
public:
  BadMagicError() : FormatError("bad magic") {}
};

class VersionMismatchError : public FormatError {
public:
  explicit VersionMismatchError(unsigned long long found)
      : FormatError("version mismatch: found " + std::to_string(found)) {}
};

class TruncatedPayloadError : public FormatError {
public:
  explicit TruncatedPayloadError(const std::string &where)
      : FormatError("truncated payload while reading " + where) {}
};

class SymmetryError : public FormatError {
public:
  explicit SymmetryError(const std::string &which)
      : FormatError("symmetry violation in " + which) {}
};

} // namespace cerom
