// errors.hpp -- error taxonomy shared across the front-end and engines.
#pragma once

#include <stdexcept>
#include <string>

namespace hypermc {

/// Syntax error with source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

/// Structural or sort violation found by validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Selector for a logic whose model checking problem is undecidable.
class UndecidableLogicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed Kripke structure input.
class KripkeFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Engine-side guard tripped (alternation depth, automaton size).
class ResourceGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hypermc
