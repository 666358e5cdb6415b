#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "sumprod/ground_set.hpp"
#include "sumprod/kernels/parallel.hpp"

namespace sumprod {

using kernels::Exec;

struct Point {
  Rational x;
  Rational y;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

/// Deduplicated finite set of rational points.
class PlanarPointSet {
 public:
  explicit PlanarPointSet(std::vector<Point> points);
  /// A x B.
  static PlanarPointSet grid(const GroundSet& a, const GroundSet& b);

  std::span<const Point> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

 private:
  std::vector<Point> points_;
};

/// Ordered triples (p, q, r) of pairwise-distinct collinear points.
///
/// For each anchor p the other points are grouped by exact direction from p; a
/// class of m points contributes m(m-1) ordered pairs (q, r), so every ordered
/// triple is counted once, through its first point.
std::uint64_t collinear_triples(const PlanarPointSet& points, Exec exec = kernels::default_exec());

/// collinear_triples on A x A.
std::uint64_t grid_collinear_triples(const GroundSet& a, Exec exec = kernels::default_exec());

struct ValueCount {
  Rational value;
  std::uint64_t count = 0;
};

/// Histogram of (a1 - a2)^2 + (a3 - a4)^2 over A^4, by self-convolution of the
/// squared-difference histogram. Total mass is |A|^4.
std::vector<ValueCount> pair_of_squares_histogram(const GroundSet& a,
                                                  Exec exec = kernels::default_exec());

/// #{(a1..a8) in A^8 : (a1-a2)^2 + (a3-a4)^2 = (a5-a6)^2 + (a7-a8)^2}.
mpz_class gk_distance_quadruples(const GroundSet& a, Exec exec = kernels::default_exec());

inline constexpr std::size_t kLiteralGkMaxSize = 4;

/// The same count with the left-hand side read as (a1-a2)^2 + (a2-a4)^4 and a3
/// free. Throws InvalidParameter for |A| > 4.
mpz_class gk_literal_count(const GroundSet& a);

}  // namespace sumprod
