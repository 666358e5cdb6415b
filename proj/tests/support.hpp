#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "sumprod/ground_set.hpp"
#include "sumprod/rational.hpp"

namespace testutil {

using sumprod::GroundSet;
using sumprod::Rational;

inline GroundSet set(std::initializer_list<long> xs) {
  std::vector<Rational> v;
  for (long x : xs) v.emplace_back(x);
  return GroundSet(std::move(v));
}

inline GroundSet set(std::initializer_list<const char*> xs) {
  std::vector<Rational> v;
  for (const char* x : xs) v.push_back(Rational::parse(x));
  return GroundSet(std::move(v));
}

inline Rational q(const char* s) { return Rational::parse(s); }

// n distinct integers from [lo, hi], optionally avoiding 0.
inline GroundSet random_ints(std::mt19937_64& rng, std::size_t n, long lo, long hi, bool nonzero) {
  std::uniform_int_distribution<long> d(lo, hi);
  std::vector<Rational> v;
  std::vector<long> seen;
  while (seen.size() < n) {
    const long x = d(rng);
    if (nonzero && x == 0) continue;
    bool dup = false;
    for (long s : seen) dup = dup || s == x;
    if (dup) continue;
    seen.push_back(x);
    v.emplace_back(x);
  }
  return GroundSet(std::move(v));
}

// n distinct rationals p/q with 1 <= |p| <= hi, 1 <= q <= den.
inline GroundSet random_rationals(std::mt19937_64& rng, std::size_t n, long hi, long den, bool positive) {
  std::uniform_int_distribution<long> dp(positive ? 1 : -hi, hi);
  std::uniform_int_distribution<long> dq(1, den);
  std::vector<Rational> v;
  while (true) {
    const long p = dp(rng);
    if (p == 0) continue;
    v.emplace_back(mpz_class(p), mpz_class(dq(rng)));
    GroundSet g(v);
    if (g.size() == n) return g;
    v.assign(g.begin(), g.end());
  }
}

}  // namespace testutil
