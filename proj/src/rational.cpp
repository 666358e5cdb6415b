#include "sumprod/rational.hpp"

#include <cctype>
#include <ostream>

#include "sumprod/errors.hpp"

namespace sumprod {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

Rational::Rational(const mpz_class& num) : q_(num) {}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) {
  if (q_.get_den() == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    if (!is_integer_literal(s)) {
      throw Error(ErrorCode::ParseError, "not an integer or p/q: '" + std::string(s) + "'");
    }
    return Rational(parse_integer(s));
  }
  const std::string_view p = trim(s.substr(0, slash));
  const std::string_view q = trim(s.substr(slash + 1));
  if (!is_integer_literal(p) || !is_integer_literal(q)) {
    throw Error(ErrorCode::ParseError, "not an integer or p/q: '" + std::string(s) + "'");
  }
  const mpz_class den = parse_integer(q);
  if (den <= 0) {
    throw Error(ErrorCode::ParseError, "denominator must be positive: '" + std::string(s) + "'");
  }
  return Rational(parse_integer(p), den);
}

std::string Rational::to_string() const {
  if (is_integer()) return num().get_str();
  return num().get_str() + "/" + den().get_str();
}

Rational Rational::operator-() const {
  Rational r;
  r.q_ = -q_;
  return r;
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational Rational::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of 0");
  Rational r;
  mpq_inv(r.q_.get_mpq_t(), q_.get_mpq_t());
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  q_ += o.q_;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  q_ -= o.q_;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  q_ *= o.q_;
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by 0");
  q_ /= o.q_;
  return *this;
}

Rational pow(const Rational& base, unsigned exponent) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.num().get_mpz_t(), exponent);
  mpz_pow_ui(d.get_mpz_t(), base.den().get_mpz_t(), exponent);
  return Rational(n, d);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace sumprod

std::size_t std::hash<sumprod::Rational>::operator()(const sumprod::Rational& r) const noexcept {
  const std::size_t h1 = mpz_get_ui(r.num().get_mpz_t()) ^ (r.sign() < 0 ? 0x9e3779b97f4a7c15ULL : 0);
  const std::size_t h2 = mpz_get_ui(r.den().get_mpz_t());
  return h1 * 1000003u ^ h2;
}
