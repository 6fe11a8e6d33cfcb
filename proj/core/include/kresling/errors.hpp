#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kresling {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A design or configuration violates its invariants.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A fold angle lies outside the window where the kinematics are defined.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double lo, double hi);
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// A length lies outside the attainable window of a segment.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, double lo, double hi,
             std::optional<std::size_t> segment = std::nullopt);
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::optional<std::size_t> segment() const noexcept { return segment_; }

 private:
  double lo_;
  double hi_;
  std::optional<std::size_t> segment_;
};

/// The constrained minimizer did not converge. Carries the last iterate and,
/// when raised during path tracing, the continuation step that failed.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<double> last_iterate,
              std::optional<std::size_t> step_index = std::nullopt);
  const std::vector<double>& last_iterate() const noexcept { return last_; }
  std::optional<std::size_t> step_index() const noexcept { return step_; }

 private:
  std::vector<double> last_;
  std::optional<std::size_t> step_;
};

/// A requested anchor cannot be built (e.g. the pipe is too narrow).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A quantity was requested from an object that does not define it
/// (cut-off lengths of a cycle that is not Valid, gait of a broken cycle).
class UnavailableError : public Error {
 public:
  using Error::Error;
};

}  // namespace kresling
