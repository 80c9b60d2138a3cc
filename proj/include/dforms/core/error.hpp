#pragma once

#include <stdexcept>
#include <string>

namespace dforms {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mesh construction or mesh compatibility failure.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Form degree out of range for the requested operation.
class DegreeError : public Error {
 public:
  using Error::Error;
};

/// State left the thermodynamic domain (T <= 0, nonpositive densities).
class ThermodynamicDomainError : public Error {
 public:
  using Error::Error;
};

class ClosureError : public Error {
 public:
  using Error::Error;
};

/// Sampled group elements do not separate the commutant cleanly.
class ResampleError : public Error {
 public:
  using Error::Error;
};

class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// Nonfinite values after a time step.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, long step, double time)
      : Error(what), step_(step), time_(time) {}
  long step() const { return step_; }
  double time() const { return time_; }

 private:
  long step_;
  double time_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dforms
