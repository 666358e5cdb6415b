#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sumprod/ground_set.hpp"
#include "sumprod/kernels/parallel.hpp"
#include "sumprod/rational.hpp"

namespace sumprod {

using kernels::Exec;

enum class Sign { plus, minus };

/// A + B, A - B, AB and A/B. ratio_set throws DivisionByZero when 0 is in B.
GroundSet sumset(const GroundSet& a, const GroundSet& b, Exec exec = kernels::default_exec());
GroundSet difference_set(const GroundSet& a, const GroundSet& b,
                         Exec exec = kernels::default_exec());
GroundSet product_set(const GroundSet& a, const GroundSet& b, Exec exec = kernels::default_exec());
GroundSet ratio_set(const GroundSet& a, const GroundSet& b, Exec exec = kernels::default_exec());

GroundSet translate(const GroundSet& a, const Rational& c);
/// zA; throws ZeroDilation for z = 0.
GroundSet dilate(const GroundSet& a, const Rational& z);
/// A⁻¹ = {1/a}; throws ZeroElement when 0 is in A.
GroundSet inverse_set(const GroundSet& a);

/// k-fold sumset A + ... + A with deduplication after every step (k >= 1).
GroundSet iterated_sumset(const GroundSet& a, unsigned k, Exec exec = kernels::default_exec());

enum class ExpanderKind { pinned_product, sum_composite, difference_composite, five_variable, custom };
std::string_view to_string(ExpanderKind kind);

struct ExpanderResult {
  std::optional<GroundSet> set;  // absent when only the cardinality is computed
  std::uint64_t cardinality = 0;
  ExpanderKind kind = ExpanderKind::custom;
};

/// A(A + a) for Sign::plus, A(A - a) for Sign::minus.
ExpanderResult pinned_product(const GroundSet& a, const Rational& pin, Sign sign,
                              Exec exec = kernels::default_exec());

enum class Inner { sum, difference };

/// A(A + A) or A(A - A).
ExpanderResult composite_expander(const GroundSet& a, Inner inner,
                                  Exec exec = kernels::default_exec());

struct PinnedBest {
  Rational pin;
  std::uint64_t cardinality = 0;
};

/// The element a of A maximising |A(A ± a)|; ties go to the smallest a.
PinnedBest best_pinned_product(const GroundSet& a, Sign sign, Exec exec = kernels::default_exec());

/// |{(a1+a2+a3+a4)^2 + log a5}| for A of positive rationals.
///
/// For positive rationals s^2 + log a = s'^2 + log a' forces a = a' (a nonzero
/// rational cannot equal the log of a rational other than 1), hence s^2 = s'^2,
/// so the count is |{s^2 : s in 4A}| * |A|. Throws NonPositiveElement.
std::uint64_t five_var_expander_size(const GroundSet& a, Exec exec = kernels::default_exec());

/// Long-double enumeration of every 5-tuple, used to cross-check the exact count.
struct FloatEnumeration {
  std::uint64_t distinct = 0;        // clusters after merging gaps <= tolerance
  std::uint64_t flagged_pairs = 0;   // adjacent values closer than tolerance but beyond roundoff
  double min_separation = 0;         // smallest gap between distinct clusters (0 if one cluster)
  bool ambiguous() const noexcept { return flagged_pairs != 0; }
};

inline constexpr std::size_t kFloatEnumerationMaxSize = 12;

/// Throws InvalidParameter for |A| > 12 and NonPositiveElement for a <= 0.
FloatEnumeration five_var_float_enumeration(const GroundSet& a, double tolerance = 1e-9);

}  // namespace sumprod
