#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gradsym {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

/// Evaluation outside the domain of an elementary function (1/0, log of a
/// non-positive number, even root of a negative number).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Total derivative would need a jet coordinate of order three.
class OrderOverflow : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

}  // namespace gradsym
