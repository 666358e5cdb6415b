#include "sumprod/enclosure.hpp"

#include <array>
#include <cstdio>
#include <vector>

#include "sumprod/errors.hpp"

namespace sumprod {

BigFloat::BigFloat() {
  mpfr_init2(v_, kPrecisionBits);
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(const BigFloat& o) {
  mpfr_init2(v_, kPrecisionBits);
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
  mpfr_init2(v_, kPrecisionBits);
  mpfr_swap(v_, o.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  if (this != &o) mpfr_swap(v_, o.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

Rational BigFloat::to_rational() const {
  if (!mpfr_number_p(v_)) throw Error(ErrorCode::InvalidParameter, "non-finite float");
  if (mpfr_zero_p(v_)) return Rational{};
  mpz_class z;
  const mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), v_);
  mpz_class p2 = 1;
  if (e >= 0) {
    mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return Rational(mpz_class(z * p2));
  }
  mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return Rational(z, p2);
}

Enclosure Enclosure::exact(const Rational& v) {
  Enclosure e;
  mpfr_set_q(e.lo_.get(), v.mpq().get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(e.hi_.get(), v.mpq().get_mpq_t(), MPFR_RNDU);
  return e;
}

Enclosure Enclosure::exact(const mpz_class& v) {
  Enclosure e;
  mpfr_set_z(e.lo_.get(), v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(e.hi_.get(), v.get_mpz_t(), MPFR_RNDU);
  return e;
}

double Enclosure::mid() const {
  BigFloat m;
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m.to_double();
}

double Enclosure::width() const {
  BigFloat w;
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w.to_double();
}

bool Enclosure::is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }

std::string Enclosure::to_string() const {
  BigFloat m;
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  std::array<char, 128> buf{};
  mpfr_snprintf(buf.data(), buf.size(), "%.20Rg", m.get());
  return buf.data();
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  Enclosure r;
  mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return r;
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
  Enclosure r;
  mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
  return r;
}

namespace {

using BinaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// Interval image of a monotone-per-argument operation: min over the four
// corners rounded down, max over the four corners rounded up.
void corners(BigFloat& lo, BigFloat& hi, const BigFloat& alo, const BigFloat& ahi,
             const BigFloat& blo, const BigFloat& bhi, BinaryOp op) {
  const std::array<const BigFloat*, 2> as{&alo, &ahi};
  const std::array<const BigFloat*, 2> bs{&blo, &bhi};
  BigFloat t;
  bool first = true;
  for (const auto* x : as) {
    for (const auto* y : bs) {
      op(t.get(), x->get(), y->get(), MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), lo.get())) mpfr_set(lo.get(), t.get(), MPFR_RNDN);
      op(t.get(), x->get(), y->get(), MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), hi.get())) mpfr_set(hi.get(), t.get(), MPFR_RNDN);
      first = false;
    }
  }
}

unsigned long small_exponent(const mpz_class& v) {
  if (!v.fits_ulong_p()) throw Error(ErrorCode::InvalidParameter, "exponent too large");
  return v.get_ui();
}

// x^(p/q) for x >= 0, p, q > 0, rounded in direction rnd.
void pow_pos(BigFloat& out, const BigFloat& x, unsigned long p, unsigned long q, mpfr_rnd_t rnd) {
  mpfr_pow_ui(out.get(), x.get(), p, rnd);
  if (q != 1) mpfr_rootn_ui(out.get(), out.get(), q, rnd);
}

}  // namespace

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  Enclosure r;
  corners(r.lo_, r.hi_, a.lo_, a.hi_, b.lo_, b.hi_, &mpfr_mul);
  return r;
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (mpfr_sgn(b.lo_.get()) <= 0 && mpfr_sgn(b.hi_.get()) >= 0) {
    throw Error(ErrorCode::DivisionByZero, "divisor enclosure contains 0");
  }
  Enclosure r;
  corners(r.lo_, r.hi_, a.lo_, a.hi_, b.lo_, b.hi_, &mpfr_div);
  return r;
}

Enclosure pow(const Enclosure& x, const Rational& exponent) {
  if (mpfr_sgn(x.lo_.get()) < 0) throw Error(ErrorCode::InvalidParameter, "pow of a negative base");
  Enclosure r;
  if (exponent.is_zero()) {
    mpfr_set_ui(r.lo_.get(), 1, MPFR_RNDN);
    mpfr_set_ui(r.hi_.get(), 1, MPFR_RNDN);
    return r;
  }
  const unsigned long p = small_exponent(abs(exponent.num()));
  const unsigned long q = small_exponent(exponent.den());
  if (exponent.sign() > 0) {
    pow_pos(r.lo_, x.lo_, p, q, MPFR_RNDD);
    pow_pos(r.hi_, x.hi_, p, q, MPFR_RNDU);
    return r;
  }
  if (mpfr_sgn(x.lo_.get()) <= 0) throw Error(ErrorCode::DivisionByZero, "negative power of 0");
  BigFloat up, down;
  pow_pos(up, x.hi_, p, q, MPFR_RNDU);
  pow_pos(down, x.lo_, p, q, MPFR_RNDD);
  mpfr_ui_div(r.lo_.get(), 1, up.get(), MPFR_RNDD);
  mpfr_ui_div(r.hi_.get(), 1, down.get(), MPFR_RNDU);
  return r;
}

Enclosure log2(const Enclosure& x) {
  if (mpfr_sgn(x.lo_.get()) <= 0) throw Error(ErrorCode::InvalidParameter, "log of a non-positive value");
  Enclosure r;
  mpfr_log2(r.lo_.get(), x.lo_.get(), MPFR_RNDD);
  mpfr_log2(r.hi_.get(), x.hi_.get(), MPFR_RNDU);
  return r;
}

bool certainly_le(const Enclosure& a, const Enclosure& b) {
  return mpfr_lessequal_p(a.hi().get(), b.lo().get()) != 0;
}

bool certainly_lt(const Enclosure& a, const Enclosure& b) {
  return mpfr_less_p(a.hi().get(), b.lo().get()) != 0;
}

}  // namespace sumprod
