#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "sumprod/enclosure.hpp"
#include "sumprod/ground_set.hpp"
#include "sumprod/setcore.hpp"

namespace sumprod {

enum class RepKind { difference, ratio };

struct RepEntry {
  Rational value;
  std::uint64_t count = 0;
};

/// Sparse representation function x -> r(x) for A - B or A / B, sorted by value.
class RepHistogram {
 public:
  RepHistogram(RepKind kind, std::size_t size_a, std::size_t size_b, std::vector<RepEntry> entries);

  RepKind kind() const noexcept { return kind_; }
  std::size_t size_a() const noexcept { return size_a_; }
  std::size_t size_b() const noexcept { return size_b_; }
  std::span<const RepEntry> entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }

  /// r(x); 0 outside the support.
  std::uint64_t count(const Rational& x) const;
  std::uint64_t total_mass() const;
  std::uint64_t max_count() const;

  /// Σ r(x)^k, exact.
  mpz_class moment(unsigned k) const;
  /// Σ r(x)^k for rational k, enclosed.
  Enclosure moment(const Rational& k) const;

 private:
  RepKind kind_;
  std::size_t size_a_;
  std::size_t size_b_;
  std::vector<RepEntry> entries_;
};

/// r_{A-B} or r_{A/B}. The ratio kind throws DivisionByZero when 0 is in B.
RepHistogram rep_histogram(const GroundSet& a, const GroundSet& b, RepKind kind,
                           Exec exec = kernels::default_exec());

/// CSV with header value_num,value_den,count, rows sorted by value.
void write_histogram_csv(std::ostream& out, const RepHistogram& h);

/// E⁺(A,B) = #{a1 - b1 = a2 - b2}.
mpz_class additive_energy(const GroundSet& a, const GroundSet& b, Exec exec = kernels::default_exec());
/// E×(A,B) = #{a1 / b1 = a2 / b2}; throws DivisionByZero when 0 is in A or B.
mpz_class multiplicative_energy(const GroundSet& a, const GroundSet& b,
                                Exec exec = kernels::default_exec());

struct EnergyValue {
  Rational moment;
  bool exact = false;
  mpz_class value;    // meaningful when exact
  Enclosure approx;   // always valid; a point enclosure for exact values

  double to_double() const { return approx.mid(); }
};

/// E_k⁺(A) = Σ r_{A-A}(x)^k for rational k >= 1. Exact for integral k.
EnergyValue energy_moment(const GroundSet& a, const Rational& k, Exec exec = kernels::default_exec());

/// |{x : r(x) >= tau}| for tau >= 1.
std::uint64_t level_set_count(const RepHistogram& h, double tau);

enum class ShiftCount { all, nonzero_only };

/// Σ_{a in A} #{(b, b', c, c') : b(c ∓ a) = b'(c' ∓ a)}.
///
/// Sign::plus shifts C by -a (the sum Σ E×(B, C - a)); Sign::minus shifts by +a.
/// Solutions with a zero product are counted unless ShiftCount::nonzero_only.
mpz_class shifted_energy_sum(const GroundSet& a, const GroundSet& b, const GroundSet& c, Sign sign,
                             ShiftCount mode = ShiftCount::all, Exec exec = kernels::default_exec());

/// Same count by enumerating (a, b, b', c) and solving for c'. O(|A||B|²|C| log|C|).
mpz_class shifted_energy_sum_reference(const GroundSet& a, const GroundSet& b, const GroundSet& c,
                                       Sign sign, ShiftCount mode = ShiftCount::all,
                                       Exec exec = kernels::default_exec());

/// A_x = A ∩ x⁻¹A; |A_x| = r_{A/A}(x). Throws ZeroDilation for x = 0, ZeroElement if 0 in A.
Subset ratio_intersection(const GroundSet& a, const Rational& x);

}  // namespace sumprod
