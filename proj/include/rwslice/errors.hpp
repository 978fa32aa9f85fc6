#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rwslice {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PositionOutOfRange : public Error {
 public:
  using Error::Error;
};

class StepBudgetExceeded : public Error {
 public:
  explicit StepBudgetExceeded(std::size_t budget)
      : Error("step budget of " + std::to_string(budget) + " elementary steps exceeded"), budget_(budget) {}
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t budget_;
};

class NoRuleApplicable : public Error {
 public:
  using Error::Error;
};

class MalformedStep : public Error {
 public:
  using Error::Error;
};

class InvalidCriterion : public Error {
 public:
  using Error::Error;
};

class ArithmeticError : public Error {
 public:
  using Error::Error;
};

class InvalidTheory : public Error {
 public:
  using Error::Error;
};

/// Raised when a sliced step cannot be reproduced on a concretization.
/// `index` is the zero-based index into the trace slice's kept steps.
class ReplayFailure : public Error {
 public:
  ReplayFailure(std::size_t index, const std::string& what)
      : Error("replay failed at sliced step " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Errors from the text formats carry a 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& kind, const std::string& message, std::size_t line, std::size_t column)
      : Error(kind + " at " + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SyntaxError : public ParseError {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : ParseError("syntax error", message, line, column) {}
};

class UnknownSymbol : public ParseError {
 public:
  UnknownSymbol(const std::string& name, std::size_t line, std::size_t column)
      : ParseError("unknown symbol", "'" + name + "'", line, column) {}
};

class ArityMismatch : public ParseError {
 public:
  ArityMismatch(const std::string& message, std::size_t line, std::size_t column)
      : ParseError("arity mismatch", message, line, column) {}
};

}  // namespace rwslice
