#pragma once

// Integer view of one or more rational sets over a common denominator.
//
// Scaling every element by D = lcm(denominators) turns sums, differences,
// products and ratios of rationals into integer arithmetic: a - b and a + b
// carry scale D, a * b carries D^2, and a / b needs no scale at all. When every
// scaled numerator is below kSmallLimit in magnitude the kernels run on
// int64_t (all the products and sums of two squares they form stay below
// 2^63); otherwise they fall back to mpz_class with identical code.

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "sumprod/rational.hpp"

namespace sumprod::lattice {

inline constexpr std::int64_t kSmallLimit = std::int64_t{1} << 30;

/// Test hook: route every kernel through the mpz_class path.
void set_force_wide(bool on) noexcept;
bool force_wide() noexcept;

template <class Int>
struct Scaled {
  std::vector<std::vector<Int>> sets;
  mpz_class den;
};

inline mpz_class to_mpz(std::int64_t v) { return mpz_class(static_cast<long>(v)); }
inline const mpz_class& to_mpz(const mpz_class& v) { return v; }

inline std::int64_t abs_int(std::int64_t v) { return v < 0 ? -v : v; }
inline mpz_class abs_int(const mpz_class& v) { return abs(v); }

inline std::int64_t gcd_int(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
inline mpz_class gcd_int(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline int sign_int(std::int64_t v) { return (v > 0) - (v < 0); }
inline int sign_int(const mpz_class& v) { return sgn(v); }

/// k / scale as a Rational.
template <class Int>
Rational to_rational(const Int& k, const mpz_class& scale) {
  return Rational(to_mpz(k), scale);
}

/// Fraction p/q with q > 0, compared by value through cross-multiplication, so
/// keys never need reducing inside the hot loops.
template <class Int>
struct Frac {
  Int p;
  Int q;
};

template <class Int>
Frac<Int> make_frac(const Int& num, const Int& den) {
  if (sign_int(den) < 0) return {Int(-num), Int(-den)};
  return {num, den};
}

struct FracLess {
  bool operator()(const Frac<std::int64_t>& a, const Frac<std::int64_t>& b) const {
    return a.p * b.q < b.p * a.q;
  }
  bool operator()(const Frac<mpz_class>& a, const Frac<mpz_class>& b) const {
    return a.p * b.q < b.p * a.q;
  }
};

template <class Int>
Rational to_rational(const Frac<Int>& f) {
  return Rational(to_mpz(f.p), to_mpz(f.q));
}

namespace detail {

struct Prepared {
  std::vector<std::vector<mpz_class>> nums;
  mpz_class den;
  bool small = true;
};

Prepared prepare(std::initializer_list<std::span<const Rational>> sets);

Scaled<std::int64_t> narrow(const Prepared& p);
Scaled<mpz_class> widen(Prepared&& p);

}  // namespace detail

/// Calls f(Scaled<std::int64_t>) or f(Scaled<mpz_class>) for the given sets.
template <class F>
decltype(auto) with_scaled(std::initializer_list<std::span<const Rational>> sets, F&& f) {
  detail::Prepared p = detail::prepare(sets);
  if (p.small && !force_wide()) return f(detail::narrow(p));
  return f(detail::widen(std::move(p)));
}

}  // namespace sumprod::lattice
