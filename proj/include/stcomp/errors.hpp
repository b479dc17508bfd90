#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stcomp {

// Vector or block length does not match the declared shape.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Graph construction failures (too few nodes, asymmetric weights, disconnected).
class TopologyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scalar parameter outside its admissible range.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A compressor failed one of the numerical certification checks.
// `witness` holds the offending input (or the final state for decay checks).
class CertificationError : public std::runtime_error {
 public:
  CertificationError(const std::string& what, std::vector<double> witness,
                     double witness_time = 0.0, double value = 0.0)
      : std::runtime_error(what),
        witness_(std::move(witness)),
        witness_time_(witness_time),
        value_(value) {}

  const std::vector<double>& witness() const noexcept { return witness_; }
  double witness_time() const noexcept { return witness_time_; }
  double value() const noexcept { return value_; }

 private:
  std::vector<double> witness_;
  double witness_time_;
  double value_;
};

// Malformed or inconsistent configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stcomp
