#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace sumprod {

/// Exact rational in lowest terms with a positive denominator.
///
/// Thin value wrapper over mpq_class. Every constructor canonicalizes, so two
/// Rationals compare equal exactly when they denote the same number.
class Rational {
 public:
  Rational() = default;

  template <std::signed_integral I>
  Rational(I v) : q_(static_cast<long>(v)) {}  // NOLINT: implicit by design of numeric literals

  template <std::unsigned_integral I>
  Rational(I v) : q_(static_cast<unsigned long>(v)) {}  // NOLINT

  Rational(const mpz_class& num);  // NOLINT
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(mpq_class q);

  /// Parses "p" or "p/q" (q > 0). Surrounding whitespace is ignored.
  static Rational parse(std::string_view text);

  const mpq_class& mpq() const noexcept { return q_; }
  const mpz_class& num() const noexcept { return q_.get_num(); }
  const mpz_class& den() const noexcept { return q_.get_den(); }

  int sign() const noexcept { return sgn(q_); }
  bool is_zero() const noexcept { return sign() == 0; }
  bool is_integer() const noexcept { return den() == 1; }

  double to_double() const { return q_.get_d(); }
  /// "p" for integers, "p/q" otherwise.
  std::string to_string() const;

  Rational operator-() const;
  Rational abs() const;
  /// Throws DivisionByZero for 0.
  Rational inverse() const;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

/// Integer power with a non-negative exponent.
Rational pow(const Rational& base, unsigned exponent);

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace sumprod

template <>
struct std::hash<sumprod::Rational> {
  std::size_t operator()(const sumprod::Rational& r) const noexcept;
};
