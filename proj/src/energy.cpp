#include "sumprod/energy.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "sumprod/errors.hpp"
#include "sumprod/kernels/lattice.hpp"

namespace sumprod {
namespace {

using lattice::Frac;
using lattice::FracLess;

template <class S>
using IntOf = typename std::decay_t<decltype(std::declval<S>().sets[0])>::value_type;

// Σ count² over a histogram of Int keys.
template <class Int>
std::uint64_t sum_of_squares(const std::vector<kernels::Run<Int>>& runs, bool skip_zero) {
  std::uint64_t total = 0;
  for (const auto& r : runs) {
    if (skip_zero && lattice::sign_int(r.key) == 0) continue;
    total += r.count * r.count;
  }
  return total;
}

template <class Int>
Int shift_value(const Int& c, const Int& a, Sign sign) {
  return sign == Sign::plus ? Int(c - a) : Int(c + a);
}

// Inverse of shift_value: recovers c from d = c ∓ a.
template <class Int>
Int unshift_value(const Int& d, const Int& a, Sign sign) {
  return sign == Sign::plus ? Int(d + a) : Int(d - a);
}

template <class Int>
bool divides_exactly(const Int& num, const Int& den, Int& quotient) {
  if constexpr (std::is_same_v<Int, std::int64_t>) {
    if (num % den != 0) return false;
    quotient = num / den;
    return true;
  } else {
    if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) return false;
    mpz_divexact(quotient.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return true;
  }
}

}  // namespace

RepHistogram::RepHistogram(RepKind kind, std::size_t size_a, std::size_t size_b,
                           std::vector<RepEntry> entries)
    : kind_(kind), size_a_(size_a), size_b_(size_b), entries_(std::move(entries)) {}

std::uint64_t RepHistogram::count(const Rational& x) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                                   [](const RepEntry& e, const Rational& v) { return e.value < v; });
  return (it != entries_.end() && it->value == x) ? it->count : 0;
}

std::uint64_t RepHistogram::total_mass() const {
  std::uint64_t t = 0;
  for (const auto& e : entries_) t += e.count;
  return t;
}

std::uint64_t RepHistogram::max_count() const {
  std::uint64_t m = 0;
  for (const auto& e : entries_) m = std::max(m, e.count);
  return m;
}

mpz_class RepHistogram::moment(unsigned k) const {
  // Group by count value: far fewer distinct counts than support points.
  std::map<std::uint64_t, std::uint64_t> mult;
  for (const auto& e : entries_) ++mult[e.count];
  mpz_class total = 0, term;
  for (const auto& [r, m] : mult) {
    mpz_ui_pow_ui(term.get_mpz_t(), r, k);
    total += term * m;
  }
  return total;
}

Enclosure RepHistogram::moment(const Rational& k) const {
  std::map<std::uint64_t, std::uint64_t> mult;
  for (const auto& e : entries_) ++mult[e.count];
  Enclosure total;
  for (const auto& [r, m] : mult) {
    total = total + pow(Enclosure::exact(mpz_class(r)), k) * Enclosure::exact(mpz_class(m));
  }
  return total;
}

RepHistogram rep_histogram(const GroundSet& a, const GroundSet& b, RepKind kind, Exec exec) {
  if (kind == RepKind::ratio && b.contains_zero()) {
    throw Error(ErrorCode::DivisionByZero, "ratio histogram with 0 in the denominator set");
  }
  auto entries = lattice::with_scaled({a.elements(), b.elements()}, [&](const auto& s) {
    using Int = IntOf<decltype(s)>;
    const auto& x = s.sets[0];
    const auto& y = s.sets[1];
    std::vector<RepEntry> out;
    if (kind == RepKind::difference) {
      const auto runs = kernels::pair_histogram<Int>(
          x.size(), y.size(), [&](std::size_t i, std::size_t j) -> Int { return x[i] - y[j]; }, exec);
      out.reserve(runs.size());
      for (const auto& r : runs) out.push_back({lattice::to_rational(r.key, s.den), r.count});
    } else {
      const auto runs = kernels::pair_histogram<Frac<Int>>(
          x.size(), y.size(),
          [&](std::size_t i, std::size_t j) { return lattice::make_frac(x[i], y[j]); }, exec,
          FracLess{});
      out.reserve(runs.size());
      for (const auto& r : runs) out.push_back({lattice::to_rational(r.key), r.count});
    }
    return out;
  });
  return RepHistogram(kind, a.size(), b.size(), std::move(entries));
}

void write_histogram_csv(std::ostream& out, const RepHistogram& h) {
  out << "value_num,value_den,count\n";
  for (const auto& e : h.entries()) {
    out << e.value.num().get_str() << ',' << e.value.den().get_str() << ',' << e.count << '\n';
  }
}

mpz_class additive_energy(const GroundSet& a, const GroundSet& b, Exec exec) {
  return rep_histogram(a, b, RepKind::difference, exec).moment(2u);
}

mpz_class multiplicative_energy(const GroundSet& a, const GroundSet& b, Exec exec) {
  if (a.contains_zero() || b.contains_zero()) {
    throw Error(ErrorCode::DivisionByZero, "multiplicative energy needs 0 outside A and B");
  }
  return rep_histogram(a, b, RepKind::ratio, exec).moment(2u);
}

EnergyValue energy_moment(const GroundSet& a, const Rational& k, Exec exec) {
  if (k < Rational(1)) throw Error(ErrorCode::InvalidParameter, "energy moment needs k >= 1");
  const RepHistogram h = rep_histogram(a, a, RepKind::difference, exec);
  EnergyValue v;
  v.moment = k;
  if (k.is_integer()) {
    if (!k.num().fits_uint_p()) throw Error(ErrorCode::InvalidParameter, "moment too large");
    v.exact = true;
    v.value = h.moment(static_cast<unsigned>(k.num().get_ui()));
    v.approx = Enclosure::exact(v.value);
  } else {
    v.approx = h.moment(k);
  }
  return v;
}

std::uint64_t level_set_count(const RepHistogram& h, double tau) {
  if (!(tau >= 1.0)) throw Error(ErrorCode::InvalidParameter, "level set threshold needs tau >= 1");
  std::uint64_t n = 0;
  for (const auto& e : h.entries()) {
    if (static_cast<double>(e.count) >= tau) ++n;
  }
  return n;
}

mpz_class shifted_energy_sum(const GroundSet& a, const GroundSet& b, const GroundSet& c, Sign sign,
                             ShiftCount mode, Exec exec) {
  const bool skip_zero = mode == ShiftCount::nonzero_only;
  const std::uint64_t total =
      lattice::with_scaled({a.elements(), b.elements(), c.elements()}, [&](const auto& s) {
        using Int = IntOf<decltype(s)>;
        const auto& as = s.sets[0];
        const auto& bs = s.sets[1];
        const auto& cs = s.sets[2];
        // Parallel over the pinned element; each product histogram is serial.
        return kernels::sum_over(
            as.size(),
            [&](std::size_t i) {
              std::vector<Int> shifted;
              shifted.reserve(cs.size());
              for (const auto& cv : cs) shifted.push_back(shift_value(cv, as[i], sign));
              const auto runs = kernels::pair_histogram<Int>(
                  bs.size(), shifted.size(),
                  [&](std::size_t p, std::size_t q) -> Int { return bs[p] * shifted[q]; },
                  Exec::serial);
              return sum_of_squares(runs, skip_zero);
            },
            exec);
      });
  return mpz_class(static_cast<unsigned long>(total));
}

mpz_class shifted_energy_sum_reference(const GroundSet& a, const GroundSet& b, const GroundSet& c,
                                       Sign sign, ShiftCount mode, Exec exec) {
  const bool skip_zero = mode == ShiftCount::nonzero_only;
  const std::uint64_t total =
      lattice::with_scaled({a.elements(), b.elements(), c.elements()}, [&](const auto& s) {
        using Int = IntOf<decltype(s)>;
        const auto& as = s.sets[0];
        const auto& bs = s.sets[1];
        const auto& cs = s.sets[2];  // sorted, as GroundSet elements are
        const auto in_c = [&](const Int& v) { return std::binary_search(cs.begin(), cs.end(), v); };
        return kernels::sum_over(
            as.size(),
            [&](std::size_t i) {
              const Int& av = as[i];
              std::uint64_t count = 0;
              for (const auto& b1 : bs) {
                for (const auto& b2 : bs) {
                  if (lattice::sign_int(b2) == 0) {
                    // b1 (c - a) = 0 for every c'.
                    if (skip_zero) continue;
                    std::uint64_t zero_lhs = 0;
                    for (const auto& cv : cs) {
                      const Int lhs = b1 * shift_value(cv, av, sign);
                      if (lattice::sign_int(lhs) == 0) ++zero_lhs;
                    }
                    count += zero_lhs * cs.size();
                    continue;
                  }
                  for (const auto& cv : cs) {
                    const Int lhs = b1 * shift_value(cv, av, sign);
                    if (skip_zero && lattice::sign_int(lhs) == 0) continue;
                    Int d2;
                    if (!divides_exactly(lhs, b2, d2)) continue;
                    if (in_c(unshift_value(d2, av, sign))) ++count;
                  }
                }
              }
              return count;
            },
            exec);
      });
  return mpz_class(static_cast<unsigned long>(total));
}

Subset ratio_intersection(const GroundSet& a, const Rational& x) {
  if (x.is_zero()) throw Error(ErrorCode::ZeroDilation, "A_x needs x != 0");
  if (a.contains_zero()) throw Error(ErrorCode::ZeroElement, "A_x needs 0 outside A");
  Subset out;
  for (const auto& y : a) {
    if (a.contains(x * y)) out.push_back(y);
  }
  return out;
}

}  // namespace sumprod
