#pragma once

#include <stdexcept>
#include <string>

namespace flowcomp {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A path that does not exist or cannot be opened.
class FileNotFoundError : public Error {
public:
  explicit FileNotFoundError(const std::string& path)
      : Error("file not found: " + path) {}
};

/// A file whose magic bytes match no supported format.
class UnsupportedFormatError : public Error {
public:
  explicit UnsupportedFormatError(const std::string& msg) : Error(msg) {}
};

/// A file that starts decoding but is truncated or internally inconsistent.
class CorruptDataError : public Error {
public:
  explicit CorruptDataError(const std::string& msg) : Error(msg) {}
};

/// Text input that fails to parse; carries a 1-based line number when known.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, long line = 0)
      : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

/// Violated precondition: bad sizes, mismatched shapes, invalid parameters.
class InvalidArgumentError : public Error {
public:
  explicit InvalidArgumentError(const std::string& msg) : Error(msg) {}
};

}  // namespace flowcomp
