#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"
#include "sumprod/errors.hpp"
#include "sumprod/geometry.hpp"

using namespace sumprod;
using testutil::set;

namespace {

std::vector<oracle::Pt<Rational>> plain(const PlanarPointSet& p) {
  std::vector<oracle::Pt<Rational>> out;
  for (const auto& pt : p.points()) out.push_back({pt.x, pt.y});
  return out;
}

}  // namespace

TEST(Collinear, Grids) {
  EXPECT_EQ(grid_collinear_triples(set({0, 1})), 0u);
  EXPECT_EQ(grid_collinear_triples(set({0, 1, 2})), 48u);
  EXPECT_EQ(grid_collinear_triples(set({5})), 0u);
  EXPECT_EQ(collinear_triples(PlanarPointSet({{0, 0}, {3, 1}})), 0u);
  EXPECT_EQ(collinear_triples(PlanarPointSet({{0, 0}, {1, 1}, {2, 2}, {2, 2}})), 6u);
}

TEST(Collinear, MatchesTripleEnumeration) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point> pts;
    const std::size_t n = 3 + trial % 20;
    std::uniform_int_distribution<long> d(-3, 3);
    for (std::size_t i = 0; i < n; ++i) pts.push_back({Rational(d(rng)), Rational(mpz_class(d(rng)), mpz_class(1 + i % 2))});
    const PlanarPointSet p(pts);
    EXPECT_EQ(collinear_triples(p), oracle::collinear_triples(plain(p)));
  }
  for (const GroundSet& a : {set({0, 1, 2, 3, 4}), set({1, 2, 4, 8}), set({"-1", "1/2", "2", "7/3", "5"})}) {
    EXPECT_EQ(grid_collinear_triples(a), oracle::collinear_triples(plain(PlanarPointSet::grid(a, a))));
  }
}

TEST(DistanceQuadruples, Examples) {
  EXPECT_EQ(gk_distance_quadruples(set({0, 1})), 96);
  EXPECT_EQ(gk_distance_quadruples(set({0, 1, 2})), 1329);
  EXPECT_EQ(gk_distance_quadruples(set({"3/2"})), 1);
}

TEST(DistanceQuadruples, PairSumHistogram) {
  const auto h = pair_of_squares_histogram(set({0, 1, 2}));
  const std::vector<std::pair<long, std::uint64_t>> want{{0, 9}, {1, 24}, {2, 16}, {4, 12}, {5, 16}, {8, 4}};
  ASSERT_EQ(h.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(h[i].value, Rational(want[i].first));
    EXPECT_EQ(h[i].count, want[i].second);
  }
}

TEST(DistanceQuadruples, MatchesEightTuples) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 8; ++trial) {
    const GroundSet a = testutil::random_rationals(rng, 1 + trial % 5, 6, 2, false);
    EXPECT_EQ(gk_distance_quadruples(a), oracle::gk_eight_tuples(oracle::elems(a)));
  }
}

TEST(DistanceQuadruples, LiteralReading) {
  // (a1-a2)^2 + (a2-a4)^4 on the left, a3 free.
  for (const GroundSet& a : {set({0, 1}), set({0, 1, 2}), set({1, 3, 4, 9})}) {
    const auto v = oracle::elems(a);
    std::uint64_t want = 0;
    for (const auto& a1 : v)
      for (const auto& a2 : v)
        for (const auto& a4 : v) {
          const Rational d = a2 - a4;
          const Rational lhs = (a1 - a2) * (a1 - a2) + d * d * d * d;
          for (const auto& a5 : v)
            for (const auto& a6 : v)
              for (const auto& a7 : v)
                for (const auto& a8 : v)
                  want += lhs == (a5 - a6) * (a5 - a6) + (a7 - a8) * (a7 - a8) ? 1 : 0;
        }
    EXPECT_EQ(gk_literal_count(a), want * a.size());
  }
  EXPECT_THROW(gk_literal_count(set({1, 2, 3, 4, 5})), Error);
}
