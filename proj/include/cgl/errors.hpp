#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cgl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Argument outside the region where an evaluator is certified.
class DomainError : public Error {
 public:
  using Error::Error;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

/// The von Mangoldt table does not reach far enough for the request.
class TableTooSmall : public Error {
 public:
  using Error::Error;
};

/// A zero catalog does not cover the requested height for some character.
class CoverageError : public Error {
 public:
  using Error::Error;
};

class NumericConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Zero scan found a count incompatible with the zero-counting main term.
class IncompleteScan : public Error {
 public:
  IncompleteScan(const std::string& what, std::string label)
      : Error(what), label_(std::move(label)) {}

  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  /// 0 when the problem is not tied to a file line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cgl
