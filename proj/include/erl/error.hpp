#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace erl {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidBagError : public Error {
 public:
  using Error::Error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class GraphError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Text could not be parsed; line() is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input exceeds a hard size limit of an exact algorithm.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class PolicyViolation : public Error {
 public:
  using Error::Error;
};

class ReplayError : public Error {
 public:
  ReplayError(std::size_t event_index, const std::string& message)
      : Error("event " + std::to_string(event_index) + ": " + message), index_(event_index) {}

  std::size_t event_index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// A property that holds for every correct input was observed to fail.
class LemmaViolation : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Internal bookkeeping disagreed with a from-scratch recomputation.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace erl
