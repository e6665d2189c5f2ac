#pragma once

#include <stdexcept>
#include <string>

namespace skyrmion {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// The requested operation has no closed form / support for this domain kind.
class UnsupportedKind : public Error {
public:
  using Error::Error;
};

/// No admissible truncated profile fits inside the domain.
class GeometryTooTight : public Error {
public:
  using Error::Error;
};

/// Tail center too close to the boundary for the grid to resolve.
class CenterOnBoundary : public Error {
public:
  using Error::Error;
};

/// Rounded topological degree changed during a minimization.
class DegreeJump : public Error {
public:
  DegreeJump(const std::string &what, long iteration, double from, double to)
      : Error(what), iteration_(iteration), from_(from), to_(to) {}

  long iteration() const { return iteration_; }
  double degree_before() const { return from_; }
  double degree_after() const { return to_; }

private:
  long iteration_;
  double from_;
  double to_;
};

/// Line search could not decrease the energy.
class NoDecrease : public Error {
public:
  using Error::Error;
};

class FitFailed : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace skyrmion
