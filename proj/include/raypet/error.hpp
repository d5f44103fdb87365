#pragma once

#include <stdexcept>
#include <string>

namespace raypet {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input text; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed data that breaks a type invariant; names the offending field.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Training could not proceed (e.g. a single-class dataset).
class TrainingError : public Error {
 public:
  using Error::Error;
};

// Loss became non-finite during training (CLI exit code 4).
class DivergenceError : public TrainingError {
 public:
  explicit DivergenceError(int epoch)
      : TrainingError("non-finite loss at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

// Session-level split impossible without leakage.
class SplitError : public Error {
 public:
  using Error::Error;
};

}  // namespace raypet
