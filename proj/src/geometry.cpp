#include "sumprod/geometry.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "sumprod/errors.hpp"
#include "sumprod/kernels/lattice.hpp"

namespace sumprod {
namespace {

template <class S>
using IntOf = typename std::decay_t<decltype(std::declval<S>().sets[0])>::value_type;

template <class Int>
struct Direction {
  Int dx;
  Int dy;
};

// Directions normalised into the half plane dx > 0 or (dx = 0, dy > 0) are
// totally ordered by angle; d1 < d2 exactly when cross(d1, d2) > 0.
struct DirectionLess {
  template <class Int>
  bool operator()(const Direction<Int>& a, const Direction<Int>& b) const {
    return a.dx * b.dy > a.dy * b.dx;
  }
};

template <class Int>
Direction<Int> normalized(Int dx, Int dy) {
  if (lattice::sign_int(dx) < 0 || (lattice::sign_int(dx) == 0 && lattice::sign_int(dy) < 0)) {
    return {Int(-dx), Int(-dy)};
  }
  return {std::move(dx), std::move(dy)};
}

}  // namespace

PlanarPointSet::PlanarPointSet(std::vector<Point> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

PlanarPointSet PlanarPointSet::grid(const GroundSet& a, const GroundSet& b) {
  std::vector<Point> pts;
  pts.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) pts.push_back({x, y});
  }
  return PlanarPointSet(std::move(pts));
}

std::uint64_t collinear_triples(const PlanarPointSet& points, Exec exec) {
  std::vector<Rational> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& p : points.points()) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  return lattice::with_scaled({xs, ys}, [&](const auto& s) {
    using Int = IntOf<decltype(s)>;
    const auto& px = s.sets[0];
    const auto& py = s.sets[1];
    const std::size_t n = px.size();
    return kernels::sum_over(
        n,
        [&](std::size_t anchor) {
          std::vector<Direction<Int>> dirs;
          dirs.reserve(n);
          for (std::size_t j = 0; j < n; ++j) {
            if (j == anchor) continue;
            dirs.push_back(normalized<Int>(px[j] - px[anchor], py[j] - py[anchor]));
          }
          const DirectionLess less;
          std::sort(dirs.begin(), dirs.end(), less);
          std::uint64_t pairs = 0;
          std::size_t i = 0;
          while (i < dirs.size()) {
            std::size_t j = i + 1;
            while (j < dirs.size() && !less(dirs[i], dirs[j])) ++j;
            const std::uint64_t m = j - i;
            pairs += m * (m - 1);
            i = j;
          }
          return pairs;
        },
        exec);
  });
}

std::uint64_t grid_collinear_triples(const GroundSet& a, Exec exec) {
  return collinear_triples(PlanarPointSet::grid(a, a), exec);
}

std::vector<ValueCount> pair_of_squares_histogram(const GroundSet& a, Exec exec) {
  return lattice::with_scaled({a.elements()}, [&](const auto& s) {
    using Int = IntOf<decltype(s)>;
    const auto& x = s.sets[0];
    const auto squares = kernels::pair_histogram<Int>(
        x.size(), x.size(),
        [&](std::size_t i, std::size_t j) -> Int {
          const Int d = x[i] - x[j];
          return d * d;
        },
        exec);
    const auto sums = kernels::weighted_histogram_rows<Int>(
        squares.size(),
        [&](std::size_t i, std::vector<kernels::Run<Int>>& out) {
          for (const auto& r : squares) {
            out.push_back({Int(squares[i].key + r.key), squares[i].count * r.count});
          }
        },
        exec);
    const mpz_class scale = s.den * s.den;
    std::vector<ValueCount> out;
    out.reserve(sums.size());
    std::uint64_t mass = 0;
    for (const auto& r : sums) {
      out.push_back({lattice::to_rational(r.key, scale), r.count});
      mass += r.count;
    }
    const std::uint64_t n = x.size();
    if (mass != n * n * n * n) throw std::logic_error("pair-of-squares histogram lost mass");
    return out;
  });
}

mpz_class gk_distance_quadruples(const GroundSet& a, Exec exec) {
  mpz_class total = 0;
  for (const auto& e : pair_of_squares_histogram(a, exec)) {
    const mpz_class c(e.count);
    total += c * c;
  }
  return total;
}

mpz_class gk_literal_count(const GroundSet& a) {
  if (a.size() > kLiteralGkMaxSize) {
    throw Error(ErrorCode::InvalidParameter, "the literal reading is only evaluated for |A| <= 4");
  }
  std::map<Rational, std::uint64_t> lhs;
  for (const auto& a1 : a)
    for (const auto& a2 : a)
      for (const auto& a4 : a) {
        const Rational d1 = a1 - a2;
        const Rational d2 = pow(a2 - a4, 4);
        ++lhs[d1 * d1 + d2];
      }
  mpz_class total = 0;
  for (const auto& e : pair_of_squares_histogram(a, Exec::serial)) {
    const auto it = lhs.find(e.value);
    if (it != lhs.end()) total += mpz_class(it->second) * e.count;
  }
  return total * static_cast<unsigned long>(a.size());
}

}  // namespace sumprod
