#pragma once

#include <stdexcept>
#include <string>

namespace bfa {

// Base for everything the library throws on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter outside an operation's domain (rho out of range, even n for
// majority, mismatched variable counts, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed text input: .bfn files, family strings, instance JSON.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Instance or table too large for the exact path requested.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace bfa
