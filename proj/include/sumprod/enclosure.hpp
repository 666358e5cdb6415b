#pragma once

#include <string>

#include <gmpxx.h>
#include <mpfr.h>

#include "sumprod/rational.hpp"

namespace sumprod {

/// Working precision for every non-integral quantity (about 77 significant digits).
inline constexpr mpfr_prec_t kPrecisionBits = 256;

/// RAII handle for one mpfr_t at kPrecisionBits.
class BigFloat {
 public:
  BigFloat();
  BigFloat(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat();

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// The exact dyadic rational held by this float.
  Rational to_rational() const;

 private:
  mpfr_t v_;
  bool live_ = true;
};

/// Closed interval [lo, hi] guaranteed to contain the true value.
///
/// Every operation rounds lo toward -inf and hi toward +inf, so an inequality
/// proven on enclosures (upper(x) <= lower(y)) holds for the exact values.
class Enclosure {
 public:
  Enclosure() = default;  // [0, 0]
  static Enclosure exact(const Rational& v);
  static Enclosure exact(const mpz_class& v);

  const BigFloat& lo() const noexcept { return lo_; }
  const BigFloat& hi() const noexcept { return hi_; }

  /// Midpoint, for reporting only.
  double mid() const;
  double width() const;
  bool is_point() const;
  /// Midpoint with 20 significant digits.
  std::string to_string() const;

  friend Enclosure operator+(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator-(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator*(const Enclosure& a, const Enclosure& b);
  /// Throws DivisionByZero when b contains 0.
  friend Enclosure operator/(const Enclosure& a, const Enclosure& b);

  /// x^(p/q) for x >= 0 (x > 0 when p < 0), computed as the q-th root of x^|p|.
  friend Enclosure pow(const Enclosure& x, const Rational& exponent);
  /// log2 x for x > 0.
  friend Enclosure log2(const Enclosure& x);

 private:
  BigFloat lo_;
  BigFloat hi_;
};

/// True only when a <= b holds for every point of both enclosures.
bool certainly_le(const Enclosure& a, const Enclosure& b);
bool certainly_lt(const Enclosure& a, const Enclosure& b);

}  // namespace sumprod
