#pragma once

// Brute-force reference counts. Nothing here touches the library's kernels:
// every oracle enumerates tuples directly (solving for the last coordinate
// where that keeps the cost polynomial of low degree) over plain std
// containers. T is sumprod::Rational or std::int64_t.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "sumprod/ground_set.hpp"
#include "sumprod/rational.hpp"

namespace oracle {

using sumprod::Rational;

template <class T>
using Vec = std::vector<T>;

inline Vec<Rational> elems(const sumprod::GroundSet& s) { return {s.begin(), s.end()}; }

inline Vec<std::int64_t> ints(const sumprod::GroundSet& s) {
  Vec<std::int64_t> out;
  for (const auto& x : s) out.push_back(x.num().get_si());
  return out;
}

template <class T>
bool member(const Vec<T>& sorted, const T& x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

// num / den when it is an element of the number type.
inline bool divide(const Rational& num, const Rational& den, Rational& out) {
  out = num / den;
  return true;
}
inline bool divide(std::int64_t num, std::int64_t den, std::int64_t& out) {
  if (num % den != 0) return false;
  out = num / den;
  return true;
}

template <class T, class Op>
std::set<T> image(const Vec<T>& a, const Vec<T>& b, Op op) {
  std::set<T> out;
  for (const auto& x : a)
    for (const auto& y : b) out.insert(op(x, y));
  return out;
}

// #{(a1, b1, a2, b2) : a1 - b1 = a2 - b2}, solving b2 = a2 - a1 + b1.
template <class T>
std::uint64_t additive_energy(const Vec<T>& a, const Vec<T>& b) {
  std::uint64_t n = 0;
  for (const auto& a1 : a)
    for (const auto& b1 : b)
      for (const auto& a2 : a) n += member(b, T(a2 - a1 + b1)) ? 1 : 0;
  return n;
}

// #{(a1, b1, a2, b2) : a1 b2 = a2 b1}, solving b2 = a2 b1 / a1. Elements nonzero.
template <class T>
std::uint64_t multiplicative_energy(const Vec<T>& a, const Vec<T>& b) {
  std::uint64_t n = 0;
  for (const auto& a1 : a)
    for (const auto& b1 : b)
      for (const auto& a2 : a) {
        T b2{};
        if (divide(T(a2 * b1), a1, b2) && member(b, b2)) ++n;
      }
  return n;
}

// Σ over pairs (a1, b1) of #{(a2, b2) : a2 - b2 = a1 - b1}^(k-1) = Σ_x r(x)^k.
template <class T>
std::uint64_t energy_moment(const Vec<T>& a, unsigned k) {
  std::uint64_t total = 0;
  for (const auto& a1 : a)
    for (const auto& b1 : a) {
      std::uint64_t r = 0;
      for (const auto& a2 : a) r += member(a, T(a2 - (a1 - b1))) ? 1 : 0;
      std::uint64_t p = 1;
      for (unsigned i = 1; i < k; ++i) p *= r;
      total += p;
    }
  return total;
}

// Σ_a #{(b, b', c, c') : b(c - s a) = b'(c' - s a)} with s = +1 (plus) or -1 (minus).
// When b' = 0 the equation no longer involves c', so every c' counts.
template <class T>
std::uint64_t shifted_energy_sum(const Vec<T>& a, const Vec<T>& b, const Vec<T>& c, bool plus) {
  std::uint64_t n = 0;
  for (const auto& x : a) {
    const T shift = plus ? x : T(-x);
    for (const auto& b1 : b)
      for (const auto& b2 : b)
        for (const auto& c1 : c) {
          const T lhs = b1 * (c1 - shift);
          if (b2 == T(0)) {
            n += lhs == T(0) ? c.size() : 0;
            continue;
          }
          T q{};
          if (divide(lhs, b2, q) && member(c, T(q + shift))) ++n;
        }
  }
  return n;
}

// Full quintuple enumeration of the same count; only for tiny sets.
template <class T>
std::uint64_t shifted_energy_sum_quintuples(const Vec<T>& a, const Vec<T>& b, const Vec<T>& c, bool plus) {
  std::uint64_t n = 0;
  for (const auto& x : a) {
    const T shift = plus ? x : T(-x);
    for (const auto& b1 : b)
      for (const auto& b2 : b)
        for (const auto& c1 : c)
          for (const auto& c2 : c) n += b1 * (c1 - shift) == b2 * (c2 - shift) ? 1 : 0;
  }
  return n;
}

template <class T>
std::uint64_t gk_eight_tuples(const Vec<T>& a) {
  std::uint64_t n = 0;
  for (const auto& a1 : a)
    for (const auto& a2 : a)
      for (const auto& a3 : a)
        for (const auto& a4 : a) {
          const T lhs = (a1 - a2) * (a1 - a2) + (a3 - a4) * (a3 - a4);
          for (const auto& a5 : a)
            for (const auto& a6 : a)
              for (const auto& a7 : a)
                for (const auto& a8 : a) n += lhs == (a5 - a6) * (a5 - a6) + (a7 - a8) * (a7 - a8) ? 1 : 0;
        }
  return n;
}

template <class T>
struct Pt {
  T x;
  T y;
  friend bool operator==(const Pt&, const Pt&) = default;
};

// Ordered triples of pairwise-distinct points with zero cross product.
template <class T>
std::uint64_t collinear_triples(const Vec<Pt<T>>& p) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (i == j || j == k || i == k) continue;
        const T cross = (p[j].x - p[i].x) * (p[k].y - p[i].y) - (p[j].y - p[i].y) * (p[k].x - p[i].x);
        n += cross == T(0) ? 1 : 0;
      }
  return n;
}

// r_{A/A}(x) = #{(a, b) : a / b = x}.
inline std::map<Rational, std::uint64_t> ratio_counts(const Vec<Rational>& a) {
  std::map<Rational, std::uint64_t> r;
  for (const auto& x : a)
    for (const auto& y : a) ++r[x / y];
  return r;
}

inline std::map<Rational, std::uint64_t> difference_counts(const Vec<Rational>& a, const Vec<Rational>& b) {
  std::map<Rational, std::uint64_t> r;
  for (const auto& x : a)
    for (const auto& y : b) ++r[x - y];
  return r;
}

// #{a : |Q ∩ a R^{-1}| >= t} == |target|, checked literally over Q x R.
inline bool witness_pointwise(const Vec<Rational>& target, const Vec<Rational>& q, const Vec<Rational>& r,
                              const Rational& t) {
  for (const auto& a : target) {
    std::uint64_t hits = 0;
    for (const auto& x : q)
      for (const auto& y : r) hits += x * y == a ? 1 : 0;
    if (Rational(hits) < t) return false;
  }
  return true;
}

}  // namespace oracle
