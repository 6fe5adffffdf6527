#include "gbdef/scalar.hpp"

#include <charconv>
#include <ostream>

#include "gbdef/error.hpp"

namespace gbdef {

namespace {

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= p - b ? a - (p - b) : a + b;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  // Extended Euclid on signed 128-bit to stay clear of overflow for p near 2^64.
  __int128 t = 0, new_t = 1;
  __int128 r = p, new_r = a;
  while (new_r != 0) {
    __int128 quotient = r / new_r;
    __int128 tmp = t - quotient * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quotient * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += p;
  return static_cast<std::uint64_t>(t);
}

}  // namespace

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::syntax: return "syntax";
    case ParseErrorKind::unknown_field: return "unknown-field";
    case ParseErrorKind::non_prime_modulus: return "non-prime-modulus";
    case ParseErrorKind::bad_scalar: return "bad-scalar";
    case ParseErrorKind::duplicate_label: return "duplicate-label";
    case ParseErrorKind::unknown_label: return "unknown-label";
    case ParseErrorKind::grading: return "grading";
    case ParseErrorKind::missing: return "missing";
  }
  return "unknown";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string& message)
    : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
      kind_(kind),
      line_(line) {}

Field Field::prime(std::uint64_t p) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(p), 0, 0, &p);
  if (p < 2 || mpz_probab_prime_p(z.get_mpz_t(), 30) == 0) {
    throw InvalidArgument("modulus " + std::to_string(p) + " is not prime");
  }
  return Field(p);
}

Scalar Field::zero() const { return from_int(0); }
Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(long long value) const {
  if (is_rational()) return Scalar::rational(value);
  std::uint64_t magnitude = value < 0 ? 0ULL - static_cast<std::uint64_t>(value)
                                      : static_cast<std::uint64_t>(value);
  std::uint64_t r = magnitude % modulus_;
  if (value < 0 && r != 0) r = modulus_ - r;
  return Scalar::residue(r, modulus_);
}

std::string Field::to_string() const {
  return is_rational() ? "rational" : "prime " + std::to_string(modulus_);
}

Scalar Scalar::rational(mpq_class value) {
  value.canonicalize();
  Scalar s;
  s.value_ = std::move(value);
  return s;
}

Scalar Scalar::rational(long long num, long long den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  mpq_class q(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  return rational(std::move(q));
}

Scalar Scalar::residue(std::uint64_t value, std::uint64_t modulus) {
  if (modulus == 0) throw InvalidArgument("residue with modulus 0");
  Scalar s;
  s.value_ = Residue{value % modulus, modulus};
  return s;
}

Field Scalar::field() const {
  if (auto r = std::get_if<Residue>(&value_)) return Field(r->modulus);
  return Field::rational();
}

bool Scalar::is_zero() const {
  if (auto r = std::get_if<Residue>(&value_)) return r->value == 0;
  return sgn(std::get<mpq_class>(value_)) == 0;
}

bool Scalar::is_one() const {
  if (auto r = std::get_if<Residue>(&value_)) return r->value == 1 % r->modulus;
  return std::get<mpq_class>(value_) == 1;
}

void Scalar::require_same_field(const Scalar& other) const {
  const auto* a = std::get_if<Residue>(&value_);
  const auto* b = std::get_if<Residue>(&other.value_);
  if ((a == nullptr) != (b == nullptr) || (a && a->modulus != b->modulus)) {
    throw FieldMismatch("arithmetic between " + field().to_string() + " and " +
                        other.field().to_string());
  }
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw InvalidArgument("inverse of zero");
  if (auto r = std::get_if<Residue>(&value_)) {
    return residue(inv_mod(r->value, r->modulus), r->modulus);
  }
  return rational(1 / std::get<mpq_class>(value_));
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  if (auto r = std::get_if<Residue>(&out.value_)) {
    r->value = r->value == 0 ? 0 : r->modulus - r->value;
  } else {
    mpq_class& q = std::get<mpq_class>(out.value_);
    mpq_neg(q.get_mpq_t(), q.get_mpq_t());
  }
  return out;
}

Scalar& Scalar::operator+=(const Scalar& other) {
  require_same_field(other);
  if (auto r = std::get_if<Residue>(&value_)) {
    r->value = add_mod(r->value, std::get<Residue>(other.value_).value, r->modulus);
  } else {
    std::get<mpq_class>(value_) += std::get<mpq_class>(other.value_);
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) {
  require_same_field(other);
  if (auto r = std::get_if<Residue>(&value_)) {
    r->value = sub_mod(r->value, std::get<Residue>(other.value_).value, r->modulus);
  } else {
    std::get<mpq_class>(value_) -= std::get<mpq_class>(other.value_);
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& other) {
  require_same_field(other);
  if (auto r = std::get_if<Residue>(&value_)) {
    r->value = mul_mod(r->value, std::get<Residue>(other.value_).value, r->modulus);
  } else {
    std::get<mpq_class>(value_) *= std::get<mpq_class>(other.value_);
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& other) {
  require_same_field(other);
  return *this *= other.inverse();
}

bool operator==(const Scalar& a, const Scalar& b) {
  const auto* ra = std::get_if<Scalar::Residue>(&a.value_);
  const auto* rb = std::get_if<Scalar::Residue>(&b.value_);
  if ((ra == nullptr) != (rb == nullptr)) return false;
  if (ra) return ra->modulus == rb->modulus && ra->value == rb->value;
  return std::get<mpq_class>(a.value_) == std::get<mpq_class>(b.value_);
}

const mpq_class& Scalar::as_rational() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return *q;
  throw FieldMismatch("rational view of a prime-field scalar");
}

std::uint64_t Scalar::as_residue() const {
  if (const auto* r = std::get_if<Residue>(&value_)) return r->value;
  throw FieldMismatch("residue view of a rational scalar");
}

std::string Scalar::to_string() const {
  if (const auto* r = std::get_if<Residue>(&value_)) return std::to_string(r->value);
  return std::get<mpq_class>(value_).get_str();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Scalar parse_scalar(std::string_view text, const Field& field) {
  auto fail = [&] {
    return ParseError(ParseErrorKind::bad_scalar, 0,
                      "invalid " + field.to_string() + " scalar '" + std::string(text) + "'");
  };
  if (field.is_prime()) {
    std::uint64_t value = 0;
    if (!all_digits(text)) throw fail();
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value >= field.modulus()) {
      throw fail();
    }
    return Scalar::residue(value, field.modulus());
  }
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  std::string_view num = body, den = "1";
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    num = body.substr(0, slash);
    den = body.substr(slash + 1);
  }
  if (!all_digits(num) || !all_digits(den)) throw fail();
  mpz_class n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw fail();
  if (negative) n = -n;
  return Scalar::rational(mpq_class(n, d));
}

}  // namespace gbdef
