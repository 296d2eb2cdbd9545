#ifndef BHSM_ERROR_HPP
#define BHSM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bhsm {

enum class ErrorKind {
  Domain,            // argument outside the mathematical domain of an operation
  Parameter,         // structurally valid call with out-of-range parameters
  Shape,             // vector length mismatch
  Config,            // bad scenario/controller configuration
  Contract,          // caller broke a stateful-call contract (e.g. time regression)
  Divergence,        // simulation state blew up
  InsufficientData,  // not enough usable samples for an estimate
  Io,                // file read/write failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t step, const std::string& what)
      : Error(ErrorKind::Divergence, what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// Config parse failure anchored to a source line (0 = no line info).
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : Error(ErrorKind::Config, what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bhsm

#endif
