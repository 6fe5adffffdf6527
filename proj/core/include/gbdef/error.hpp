#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace gbdef {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic or linear algebra between values over different fields.
class FieldMismatch : public Error {
 public:
  using Error::Error;
};

/// Shapes that do not fit together (matrix sizes, map sources/targets).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A requested tensor exponent lies outside the configured bound.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed. Seeing one means a bug, not bad input.
class InternalInvariant : public Error {
 public:
  using Error::Error;
};

class MalformedBialgebra : public Error {
 public:
  using Error::Error;
};

class MalformedDeformation : public Error {
 public:
  using Error::Error;
};

/// Raised when a pair offered as a 2-cocycle violates one of its three relations.
class NotACocycle : public Error {
 public:
  NotACocycle(std::string relation, const std::string& what)
      : Error(what), relation_(std::move(relation)) {}
  /// "associativity", "compatibility" or "coassociativity".
  const std::string& relation() const { return relation_; }

 private:
  std::string relation_;
};

/// Full structure tables that are not a filtered deformation of the given base.
class NotALifting : public Error {
 public:
  using Error::Error;
};

/// The associated graded of the tables differs from the base bialgebra.
class LiftingMismatch : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind {
  syntax,
  unknown_field,
  non_prime_modulus,
  bad_scalar,
  duplicate_label,
  unknown_label,
  grading,
  missing,
};

const char* to_string(ParseErrorKind kind);

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& message);
  ParseErrorKind kind() const { return kind_; }
  /// 1-based; 0 when the problem is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

}  // namespace gbdef
