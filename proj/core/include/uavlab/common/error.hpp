#pragma once

#include <stdexcept>
#include <string>

namespace uavlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value (atmosphere range, aircraft geometry, tables).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A control input outside its admissible range.
class CommandError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the line (1-based, 0 when unknown) and the
/// offending field path.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::string field)
      : Error(what), line_(line), field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// A well-formed input that violates a domain invariant.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// Telemetry unsuitable for analysis (too short, missing columns).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace uavlab
