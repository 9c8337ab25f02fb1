#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace padic {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (maps to CLI exit code 2).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Polynomial or ball-list text that does not match the grammar.
class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InvalidInput(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An enumeration or modulus would exceed the configured cap (exit code 3).
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// A stationary-phase or non-degeneracy certificate cannot be produced (exit code 4).
class CertificateUnavailable : public Error {
 public:
  using Error::Error;
};

/// Refinement hit its depth cap before deciding.
class Indeterminate : public CertificateUnavailable {
 public:
  using CertificateUnavailable::CertificateUnavailable;
};

}  // namespace padic
