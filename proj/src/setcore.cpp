#include "sumprod/setcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>
#include <vector>

#include "sumprod/errors.hpp"
#include "sumprod/kernels/lattice.hpp"

namespace sumprod {
namespace {

using lattice::Frac;
using lattice::FracLess;

template <class S>
using IntOf = typename std::decay_t<decltype(std::declval<S>().sets[0])>::value_type;

enum class Op { add, sub, mul, div };

std::vector<Rational> combine(const GroundSet& a, const GroundSet& b, Op op, Exec exec) {
  return lattice::with_scaled({a.elements(), b.elements()}, [&](const auto& s) {
    using Int = IntOf<decltype(s)>;
    const auto& x = s.sets[0];
    const auto& y = s.sets[1];
    std::vector<Rational> out;
    if (op == Op::div) {
      const auto runs = kernels::pair_histogram<Frac<Int>>(
          x.size(), y.size(), [&](std::size_t i, std::size_t j) { return lattice::make_frac(x[i], y[j]); },
          exec, FracLess{});
      out.reserve(runs.size());
      for (const auto& r : runs) out.push_back(lattice::to_rational(r.key));
      return out;
    }
    const mpz_class scale = op == Op::mul ? mpz_class(s.den * s.den) : s.den;
    const auto runs = kernels::pair_histogram<Int>(
        x.size(), y.size(),
        [&](std::size_t i, std::size_t j) -> Int {
          switch (op) {
            case Op::add: return x[i] + y[j];
            case Op::sub: return x[i] - y[j];
            default: return x[i] * y[j];
          }
        },
        exec);
    out.reserve(runs.size());
    for (const auto& r : runs) out.push_back(lattice::to_rational(r.key, scale));
    return out;
  });
}

}  // namespace

GroundSet sumset(const GroundSet& a, const GroundSet& b, Exec exec) {
  return GroundSet(combine(a, b, Op::add, exec));
}

GroundSet difference_set(const GroundSet& a, const GroundSet& b, Exec exec) {
  return GroundSet(combine(a, b, Op::sub, exec));
}

GroundSet product_set(const GroundSet& a, const GroundSet& b, Exec exec) {
  return GroundSet(combine(a, b, Op::mul, exec));
}

GroundSet ratio_set(const GroundSet& a, const GroundSet& b, Exec exec) {
  if (b.contains_zero()) throw Error(ErrorCode::DivisionByZero, "0 in the denominator set");
  return GroundSet(combine(a, b, Op::div, exec));
}

GroundSet translate(const GroundSet& a, const Rational& c) {
  std::vector<Rational> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(x + c);
  return GroundSet(std::move(out));
}

GroundSet dilate(const GroundSet& a, const Rational& z) {
  if (z.is_zero()) throw Error(ErrorCode::ZeroDilation, "dilation by 0");
  std::vector<Rational> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(x * z);
  return GroundSet(std::move(out));
}

GroundSet inverse_set(const GroundSet& a) {
  if (a.contains_zero()) throw Error(ErrorCode::ZeroElement, "0 has no inverse");
  std::vector<Rational> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(x.inverse());
  return GroundSet(std::move(out));
}

GroundSet iterated_sumset(const GroundSet& a, unsigned k, Exec exec) {
  if (k == 0) throw Error(ErrorCode::InvalidParameter, "iterated sumset needs k >= 1");
  GroundSet acc = a;
  for (unsigned i = 1; i < k; ++i) acc = sumset(acc, a, exec);
  return acc;
}

std::string_view to_string(ExpanderKind kind) {
  switch (kind) {
    case ExpanderKind::pinned_product: return "pinned-product";
    case ExpanderKind::sum_composite: return "A(A+A)";
    case ExpanderKind::difference_composite: return "A(A-A)";
    case ExpanderKind::five_variable: return "four-fold-log";
    case ExpanderKind::custom: return "custom";
  }
  return "custom";
}

ExpanderResult pinned_product(const GroundSet& a, const Rational& pin, Sign sign, Exec exec) {
  GroundSet shifted = translate(a, sign == Sign::plus ? pin : -pin);
  GroundSet set = product_set(a, shifted, exec);
  const auto n = set.size();
  return {std::move(set), n, ExpanderKind::pinned_product};
}

ExpanderResult composite_expander(const GroundSet& a, Inner inner, Exec exec) {
  GroundSet mid = inner == Inner::sum ? sumset(a, a, exec) : difference_set(a, a, exec);
  GroundSet set = product_set(a, mid, exec);
  const auto n = set.size();
  return {std::move(set), n,
          inner == Inner::sum ? ExpanderKind::sum_composite : ExpanderKind::difference_composite};
}

PinnedBest best_pinned_product(const GroundSet& a, Sign sign, Exec exec) {
  // The outer loop over pins is the parallel axis; each product set runs serially.
  std::vector<std::uint64_t> sizes(a.size());
  kernels::for_each_index(
      a.size(),
      [&](std::size_t i) { sizes[i] = pinned_product(a, a[i], sign, Exec::serial).cardinality; },
      exec);
  std::size_t best = 0;
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] > sizes[best]) best = i;
  }
  return {a[best], sizes[best]};
}

std::uint64_t five_var_expander_size(const GroundSet& a, Exec exec) {
  if (!a.all_positive()) {
    throw Error(ErrorCode::NonPositiveElement, "the five-variable expander needs A of positive elements");
  }
  const GroundSet four = iterated_sumset(a, 4, exec);
  std::vector<Rational> squares;
  squares.reserve(four.size());
  for (const auto& s : four) squares.push_back(s * s);
  std::sort(squares.begin(), squares.end());
  const auto distinct = static_cast<std::uint64_t>(
      std::unique(squares.begin(), squares.end()) - squares.begin());
  return distinct * a.size();
}

FloatEnumeration five_var_float_enumeration(const GroundSet& a, double tolerance) {
  if (a.size() > kFloatEnumerationMaxSize) {
    throw Error(ErrorCode::InvalidParameter, "float enumeration is limited to |A| <= 12");
  }
  if (!a.all_positive()) throw Error(ErrorCode::NonPositiveElement, "elements must be positive");
  std::vector<long double> x;
  x.reserve(a.size());
  for (const auto& v : a) {
    x.push_back(static_cast<long double>(v.num().get_d()) / static_cast<long double>(v.den().get_d()));
  }
  const std::size_t n = x.size();
  std::vector<long double> values;
  values.reserve(n * n * n * n * n);
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2)
      for (std::size_t i3 = 0; i3 < n; ++i3)
        for (std::size_t i4 = 0; i4 < n; ++i4) {
          const long double s = x[i1] + x[i2] + x[i3] + x[i4];
          for (std::size_t i5 = 0; i5 < n; ++i5) values.push_back(s * s + std::log2(x[i5]));
        }
  std::sort(values.begin(), values.end());

  FloatEnumeration out;
  out.distinct = 1;
  out.min_separation = std::numeric_limits<double>::infinity();
  constexpr long double kRoundoff = 64 * std::numeric_limits<long double>::epsilon();
  for (std::size_t i = 1; i < values.size(); ++i) {
    const long double gap = values[i] - values[i - 1];
    const long double scale = std::max<long double>(1, std::fabs(values[i]));
    if (gap > tolerance) {
      ++out.distinct;
      out.min_separation = std::min(out.min_separation, static_cast<double>(gap));
    } else if (gap > kRoundoff * scale) {
      ++out.flagged_pairs;
    }
  }
  if (out.distinct == 1) out.min_separation = 0;
  return out;
}

}  // namespace sumprod
