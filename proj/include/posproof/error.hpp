#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posproof {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error("syntax error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class NotNegative : public Error {
 public:
  using Error::Error;
};

class NotPositive : public Error {
 public:
  using Error::Error;
};

/// A proof-term that is not in beta-normal eta-long shape for its goal.
class IllFormedTerm : public Error {
 public:
  using Error::Error;
};

/// A deduction rule was applied to a goal of the wrong shape.
class GoalShapeError : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class InconsistentTrace : public Error {
 public:
  using Error::Error;
};

/// Raised when an internal invariant is violated (a bug, never an input error).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace posproof
