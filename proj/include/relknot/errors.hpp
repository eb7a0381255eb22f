#pragma once

#include <stdexcept>
#include <string>

namespace relknot {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown element, arc, component or variable name.
class NameError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `line` and `column` are 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line == 0 && column == 0) return what;
    std::string where = "line " + std::to_string(line);
    if (column != 0) where += ", column " + std::to_string(column);
    return where + ": " + what;
  }

  int line_;
  int column_;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An operation of a partial algebra was applied outside its domain.
class PartialityError : public Error {
 public:
  using Error::Error;
};

class AxiomError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A hard size limit was exceeded (truth-table variables, state counts).
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace relknot
