#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"
#include "sumprod/energy.hpp"
#include "sumprod/errors.hpp"

using namespace sumprod;
using testutil::q;
using testutil::set;

TEST(RepHistogram, Differences) {
  const RepHistogram h = rep_histogram(set({1, 2, 3}), set({1, 2, 3}), RepKind::difference);
  ASSERT_EQ(h.support_size(), 5u);
  EXPECT_EQ(h.count(0), 3u);
  EXPECT_EQ(h.count(1), 2u);
  EXPECT_EQ(h.count(-1), 2u);
  EXPECT_EQ(h.count(2), 1u);
  EXPECT_EQ(h.count(-2), 1u);
  EXPECT_EQ(h.count(7), 0u);
  EXPECT_EQ(h.total_mass(), 9u);
  EXPECT_EQ(rep_histogram(set({4}), set({4}), RepKind::difference).count(0), 1u);
}

TEST(RepHistogram, Ratios) {
  const RepHistogram h = rep_histogram(set({1, 2, 3}), set({1, 2, 3}), RepKind::ratio);
  EXPECT_EQ(h.support_size(), 7u);
  EXPECT_EQ(h.count(1), 3u);
  for (const char* x : {"1/2", "1/3", "2", "2/3", "3", "3/2"}) EXPECT_EQ(h.count(q(x)), 1u) << x;
  EXPECT_THROW(rep_histogram(set({1}), set({0, 1}), RepKind::ratio), Error);
}

TEST(RepHistogram, MatchesPairCounts) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const GroundSet a = testutil::random_rationals(rng, 1 + trial % 15, 12, 4, false);
    const GroundSet b = testutil::random_rationals(rng, 1 + trial % 11, 12, 4, false);
    const auto want = oracle::difference_counts(oracle::elems(a), oracle::elems(b));
    const RepHistogram h = rep_histogram(a, b, RepKind::difference);
    ASSERT_EQ(h.support_size(), want.size());
    for (const auto& e : h.entries()) EXPECT_EQ(e.count, want.at(e.value));
  }
}

TEST(Energy, SmallExamples) {
  EXPECT_EQ(additive_energy(set({1, 2, 3}), set({1, 2, 3})), 19);
  EXPECT_EQ(multiplicative_energy(set({1, 2, 3}), set({1, 2, 3})), 15);
  EXPECT_EQ(additive_energy(set({"-3/4"}), set({"-3/4"})), 1);
  EXPECT_EQ(multiplicative_energy(set({1, 2, 4}), set({1, 2, 4})), 19);
  EXPECT_THROW(multiplicative_energy(set({0, 1}), set({1})), Error);
}

TEST(Energy, Moments) {
  const EnergyValue e3 = energy_moment(set({1, 2, 3}), 3);
  EXPECT_TRUE(e3.exact);
  EXPECT_EQ(e3.value, 45);

  const EnergyValue e15 = energy_moment(set({0, 1}), q("3/2"));
  EXPECT_FALSE(e15.exact);
  // 2^{1.5} + 2 = 4.828427124746190...
  EXPECT_TRUE(certainly_lt(Enclosure::exact(q("4828427124746190/1000000000000000")), e15.approx));
  EXPECT_TRUE(certainly_lt(e15.approx, Enclosure::exact(q("4828427124746191/1000000000000000"))));

  const GroundSet a = set({2, 5, 11, 12, 30});
  EXPECT_EQ(energy_moment(a, 1).value, 25);
  EXPECT_EQ(energy_moment(a, 2).value, additive_energy(a, a));
  EXPECT_THROW(energy_moment(a, q("1/2")), Error);
}

TEST(Energy, LevelSets) {
  const RepHistogram h = rep_histogram(set({1, 2, 3}), set({1, 2, 3}), RepKind::difference);
  EXPECT_EQ(level_set_count(h, 2), 3u);
  EXPECT_EQ(level_set_count(h, 1), h.support_size());
  EXPECT_EQ(level_set_count(h, 4), 0u);
}

TEST(Energy, ShiftedSums) {
  const GroundSet s = set({1, 2});
  EXPECT_EQ(shifted_energy_sum(s, s, s, Sign::minus), 8);
  EXPECT_EQ(oracle::shifted_energy_sum_quintuples(oracle::elems(s), oracle::elems(s), oracle::elems(s), false), 8u);

  const GroundSet b = set({1, 3, 4}), c = set({2, 5, 6, 9});
  EXPECT_EQ(shifted_energy_sum(set({"0"}), b, c, Sign::plus), multiplicative_energy(b, c));
  EXPECT_EQ(shifted_energy_sum(set({7}), set({7}), set({3}), Sign::plus), 1);
  EXPECT_EQ(shifted_energy_sum(set({1, 2, 3}), set({5}), set({9}), Sign::minus), 3);
}

TEST(Energy, ShiftedSumCountsZeroProducts) {
  // c - a = 0 for a = c, so every pair (b, b') with c' = a solves the equation.
  const GroundSet a = set({1, 2}), b = set({-1, 1}), c = set({1, 2, 5});
  for (Sign s : {Sign::plus, Sign::minus}) {
    const bool plus = s == Sign::plus;
    const auto want = oracle::shifted_energy_sum_quintuples(oracle::elems(a), oracle::elems(b), oracle::elems(c), plus);
    EXPECT_EQ(shifted_energy_sum(a, b, c, s), want);
    EXPECT_EQ(shifted_energy_sum_reference(a, b, c, s), want);
  }
  const GroundSet bz = set({0, 1, 2});
  for (Sign s : {Sign::plus, Sign::minus}) {
    const auto want =
        oracle::shifted_energy_sum_quintuples(oracle::elems(a), oracle::elems(bz), oracle::elems(c), s == Sign::plus);
    EXPECT_EQ(shifted_energy_sum(a, bz, c, s), want);
    EXPECT_LE(shifted_energy_sum(a, bz, c, s, ShiftCount::nonzero_only), shifted_energy_sum(a, bz, c, s));
  }
}

TEST(Energy, RandomAgreement) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const GroundSet a = testutil::random_rationals(rng, 1 + trial % 10, 9, 3, false);
    const GroundSet b = testutil::random_rationals(rng, 1 + trial % 7, 9, 3, false);
    const GroundSet c = testutil::random_rationals(rng, 1 + trial % 8, 9, 3, false);
    const auto av = oracle::elems(a), bv = oracle::elems(b), cv = oracle::elems(c);
    EXPECT_EQ(additive_energy(a, b), oracle::additive_energy(av, bv));
    EXPECT_EQ(multiplicative_energy(a, b), oracle::multiplicative_energy(av, bv));
    EXPECT_EQ(energy_moment(a, 3).value, oracle::energy_moment(av, 3));
    for (Sign s : {Sign::plus, Sign::minus}) {
      EXPECT_EQ(shifted_energy_sum(a, b, c, s), oracle::shifted_energy_sum_quintuples(av, bv, cv, s == Sign::plus));
    }
  }
}

TEST(Energy, RatioIntersection) {
  EXPECT_EQ(ratio_intersection(set({1, 2, 4}), 2), (Subset{Rational(1), Rational(2)}));
  EXPECT_EQ(ratio_intersection(set({1, 2, 4}), 1), (Subset{Rational(1), Rational(2), Rational(4)}));
  EXPECT_TRUE(ratio_intersection(set({1, 2, 4}), 3).empty());
  EXPECT_THROW(ratio_intersection(set({1, 2}), 0), Error);
}
