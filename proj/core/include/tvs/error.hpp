#pragma once

#include <stdexcept>
#include <string>

namespace tvs {

/// Root of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different ambient spaces (or have the wrong shape).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (enumeration, grid, search) would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the supported range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; `offset` is a byte offset into the text when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset = 0)
      : Error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace tvs
