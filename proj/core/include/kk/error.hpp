#pragma once

#include <stdexcept>
#include <string>

namespace kk {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input lies outside the declared model domain, or violates a documented
/// precondition (negative initial density, malformed profile, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Scenario or trajectory file could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A required input file is missing or unreadable.
class MissingInputError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or non-positive state produced by a solver.
class BlowupError : public Error {
 public:
  BlowupError(const std::string& what, int cell, double time)
      : Error(what), cell_(cell), time_(time) {}
  int cell() const noexcept { return cell_; }
  double time() const noexcept { return time_; }

 private:
  int cell_;
  double time_;
};

/// A recorded state left the (inflated) invariant region.
class RegionViolationError : public Error {
 public:
  RegionViolationError(const std::string& what, int cell, double time,
                       double rho, double m)
      : Error(what), cell_(cell), time_(time), rho_(rho), m_(m) {}
  int cell() const noexcept { return cell_; }
  double time() const noexcept { return time_; }
  double rho() const noexcept { return rho_; }
  double m() const noexcept { return m_; }

 private:
  int cell_;
  double time_;
  double rho_;
  double m_;
};

class EmptyRegionError : public Error {
 public:
  using Error::Error;
};

}  // namespace kk
