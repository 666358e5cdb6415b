#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "sumprod/ground_set.hpp"
#include "sumprod/kernels/parallel.hpp"
#include "sumprod/rational.hpp"

namespace sumprod {

using kernels::Exec;

/// A certified upper bound value >= d_*(target).
///
/// Constructed only through witness_value, which checks all three constraints.
struct DStarWitness {
  Rational t;
  GroundSet q;
  GroundSet r;
  GroundSet target;
  Rational value;  // |Q|^2 |R|^2 / (|target| t^3)
};

/// Validates (t, Q, R) against target and returns the witness. Throws
/// InvalidWitness whose detail is the failed constraint: positive-t, zero-free,
/// size or pointwise-t.
DStarWitness witness_value(const GroundSet& target, const GroundSet& q, const GroundSet& r,
                           const Rational& t);

struct LabeledWitness {
  std::string label;
  DStarWitness witness;
};

/// Every witness dstar_upper_bound considers, in evaluation order:
/// "C=A", "C={1}", "C=P" and "pigeonhole" (Q = A, R = P^-1, t = min |A ∩ aP|).
/// Candidates that are undefined for A (|A| < 2, or t = 0) are left out.
std::vector<LabeledWitness> dstar_portfolio(const GroundSet& a);

/// Smallest-value witness from dstar_portfolio; ties keep the earlier one.
/// Throws ZeroElement when 0 is in A.
DStarWitness dstar_upper_bound(const GroundSet& a);

enum class Relation { ge, gt, le, lt, eq };
std::string_view to_string(Relation r);
bool holds(const Rational& lhs, Relation r, const Rational& rhs);

/// One checked inequality lhs (relation) rhs, both exact. When the true
/// right-hand side is irrational, rhs is a rational bound on it rounded in the
/// direction that makes the assertion harder to satisfy.
struct Assertion {
  std::string name;
  Rational lhs;
  Relation relation = Relation::ge;
  Rational rhs;
  bool satisfied = false;
};

struct RefinementCertificate {
  GroundSet a;
  mpz_class energy;  // E×(A)
  Rational k;        // |A|^3 / E×(A)
  GroundSet p;
  Rational delta;
  std::optional<GroundSet> a_prime;
  std::optional<Rational> t;
  std::optional<DStarWitness> witness;  // a d_* witness for a_prime
  std::vector<Assertion> assertions;

  bool all_satisfied() const;
};

/// Stage one: a dyadic class P of popular ratios with Δ <= r_{A/A} < 2Δ on P.
///
/// Counts below τ0 = |A|/(2K) carry at most half the energy; the classes are
/// [2^j, 2^{j+1}) cut off below at τ0, and the one with the largest Σ r² wins
/// (ties: larger Δ). If that class misses the certified mass bound the classes
/// [τ0 2^j, τ0 2^{j+1}) are used instead, of which there are at most
/// log2(2K) + 1, so one of them always meets it. Both partitions are invariant
/// under x -> 1/x, so P = P^-1.
/// Throws ZeroElement, TooSmall (|A| < 2).
RefinementCertificate popular_ratio_class(const GroundSet& a, Exec exec = kernels::default_exec());

/// Stage one plus A' = {x in A : |P ∩ xA^-1| >= Δ|P|/(4|A|)}, with the
/// overlap and energy assertions and the witness (t, Q = P, R = A) for A'.
RefinementCertificate refine_energy_subset(const GroundSet& a, Exec exec = kernels::default_exec());

/// Stage one plus a dyadic class A' of c(a) = |A ∩ aP| with t <= c < 2t
/// (largest Σ c, ties larger t) and the witness (t, Q = A, R = P^-1) for A'.
RefinementCertificate double_pigeonhole(const GroundSet& a, Exec exec = kernels::default_exec());

/// Recomputes every count in the certificate from scratch with plain
/// rational arithmetic and returns a description of each disagreement.
std::vector<std::string> recheck(const RefinementCertificate& cert);
std::vector<std::string> recheck(const DStarWitness& w);

/// JSON document with exact numerator/denominator strings for every assertion.
std::string to_json(const RefinementCertificate& cert);
std::string to_json(const DStarWitness& w);

enum class DilationCandidates { inverse_elements, ratio_times_inverse, custom };

struct DilationChoice {
  Rational z;
  std::uint64_t overlap = 0;  // Σ_{x in zA} r_{A/A}(x)
  mpz_class energy;           // E×(A)
  /// f(z) >= E×(A)/(|A| log2|A|); empty when |A| = 1.
  std::optional<bool> bound_satisfied;
  /// f(z) |A| log2|A| / E×(A); empty when |A| = 1.
  std::optional<double> bound_ratio;
};

/// Maximises f(z) = Σ_{x in zA} r_{A/A}(x) over the candidate set: A^-1 ∪ {1},
/// (A/A)·A^-1, or `custom`. Ties go to the smallest z.
/// Throws ZeroElement, ZeroDilation (0 among custom candidates), InvalidParameter
/// (empty custom list).
DilationChoice best_dilation(const GroundSet& a,
                             DilationCandidates mode = DilationCandidates::inverse_elements,
                             const std::vector<Rational>& custom = {},
                             Exec exec = kernels::default_exec());

/// f(z) for one z.
std::uint64_t dilation_overlap(const GroundSet& a, const Rational& z);

}  // namespace sumprod
