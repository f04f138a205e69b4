#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ehs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed concrete syntax. `position` is a 0-based byte offset into the
// text that was being parsed (line-relative for system files).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbolError : public ParseError {
 public:
  UnknownSymbolError(const std::string& token, std::size_t position)
      : ParseError("unknown symbol '" + token + "'", position), token_(token) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

// The system description violates a structural invariant.
class ModelError : public Error {
 public:
  using Error::Error;
};

// The formula is outside the fragment an engine decides.
class FragmentError : public Error {
 public:
  using Error::Error;
};

// An interval is not a path of the global transition relation, or does not
// start at a reachable configuration.
class IntervalError : public Error {
 public:
  using Error::Error;
};

// Paper-bound enumeration would exceed the configured frontier ceiling.
class BoundInfeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace ehs
