#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ppsz {

/// Input text that is not valid DIMACS (or a malformed metadata comment).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A caller violated an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or memory guard refused to run.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The width-bounded resolution closure grew past its cap.
class ClosureOverflow : public GuardError {
 public:
  using GuardError::GuardError;
};

/// A randomized generator ran out of retries.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ppsz
