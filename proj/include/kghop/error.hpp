#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kghop {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed triple input. Carries the 1-based line number (0 when the error
// is not tied to a line, e.g. empty input).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Contract violation on arguments (k = 0, m = 0, id out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Partition store does not match the plan or cannot produce a partition.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// On-disk archive problems. Each failure mode has its own type so callers
// and tests can tell them apart.
class FormatError : public Error {
 public:
  using Error::Error;
};

class BadMagicError : public FormatError {
 public:
  using FormatError::FormatError;
};

class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

class ChecksumError : public FormatError {
 public:
  using FormatError::FormatError;
};

class TruncatedError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Raised by retrieval when a caller-supplied deadline passes between hops.
class QueryTimeout : public Error {
 public:
  using Error::Error;
};

}  // namespace kghop
