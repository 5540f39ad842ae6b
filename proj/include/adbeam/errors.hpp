#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adbeam {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid physical parameters, basis sizes or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Arrays whose lengths or grids do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside of its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The attached mode-0 amplitude never reaches the threshold.
class NoCrossingError : public Error {
 public:
  using Error::Error;
};

/// The closed-form solver met a field that is partly attached and partly
/// detached. Only the splitting integrator can continue from there.
class MixedRegimeError : public Error {
 public:
  MixedRegimeError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Non-finite values appeared while stepping.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Output directory or file could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace adbeam
