#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

namespace gbdef {

class Scalar;

/// The base field: the rationals or a prime field F_p with p < 2^64.
class Field {
 public:
  /// Defaults to the rationals.
  Field() = default;

  static Field rational() { return Field(); }
  /// Throws InvalidArgument unless `p` is prime.
  static Field prime(std::uint64_t p);

  bool is_rational() const { return modulus_ == 0; }
  bool is_prime() const { return modulus_ != 0; }
  /// 0 for the rationals.
  std::uint64_t modulus() const { return modulus_; }
  /// 0 for the rationals, otherwise p.
  std::uint64_t characteristic() const { return modulus_; }

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long long value) const;

  /// "rational" or "prime <p>", the same words the definition files use.
  std::string to_string() const;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  friend class Scalar;
  explicit Field(std::uint64_t p) : modulus_(p) {}
  std::uint64_t modulus_ = 0;
};

/// An exact field element. Rationals are kept canonical by GMP; residues are
/// kept in [0, p). Mixing fields in arithmetic throws FieldMismatch.
class Scalar {
 public:
  /// Rational zero.
  Scalar() = default;

  static Scalar rational(mpq_class value);
  static Scalar rational(long long num, long long den = 1);
  static Scalar residue(std::uint64_t value, std::uint64_t modulus);

  Field field() const;
  bool is_zero() const;
  bool is_one() const;

  /// Throws InvalidArgument on zero.
  Scalar inverse() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Scalar& other);
  Scalar& operator/=(const Scalar& other);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  /// Values over different fields compare unequal.
  friend bool operator==(const Scalar& a, const Scalar& b);

  /// Rational view; only valid over the rationals.
  const mpq_class& as_rational() const;
  /// Residue view; only valid over a prime field.
  std::uint64_t as_residue() const;

  /// Text form: `a`, `-a`, `a/b` for rationals, a decimal residue otherwise.
  std::string to_string() const;

 private:
  struct Residue {
    std::uint64_t value;
    std::uint64_t modulus;
  };
  std::variant<mpq_class, Residue> value_;

  void require_same_field(const Scalar& other) const;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// Parses the scalar text syntax over `field`. Throws ParseError(bad_scalar)
/// with line 0; callers that know a line rethrow with it.
Scalar parse_scalar(std::string_view text, const Field& field);

}  // namespace gbdef
