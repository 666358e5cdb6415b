#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"
#include "sumprod/errors.hpp"
#include "sumprod/families.hpp"
#include "sumprod/setcore.hpp"

using namespace sumprod;
using testutil::set;

TEST(Families, ClosedForms) {
  EXPECT_EQ(generate(parse_family("interval:5")), set({1, 2, 3, 4, 5}));
  EXPECT_EQ(generate(parse_family("geometric:2:4")), set({1, 2, 4, 8}));
  EXPECT_EQ(generate(parse_family("geometric:3/2:3")), set({"1", "3/2", "9/4"}));
  EXPECT_EQ(generate(parse_family("convex-squares:4")), set({1, 4, 9, 16}));
  EXPECT_EQ(generate(parse_family("ap-plus-ap:4")), set({1, 2, 6, 7}));
}

TEST(Families, RandomIsSeededAndExact) {
  const FamilySpec f = parse_family("random:1000000:128:seed=7");
  EXPECT_EQ(f.n, 128u);
  EXPECT_EQ(f.seed, 7u);
  const GroundSet a = generate(f);
  EXPECT_EQ(a.size(), 128u);
  EXPECT_EQ(a, generate(parse_family("random:1000000:128:seed=7")));
  EXPECT_NE(a, generate(parse_family("random:1000000:128:seed=8")));
  EXPECT_GE(a.min(), Rational(1));
  EXPECT_LE(a.max(), Rational(1000000));

  // M = n forces the whole range.
  EXPECT_EQ(generate(parse_family("random:6:6:seed=3")), set({1, 2, 3, 4, 5, 6}));
  EXPECT_THROW(generate(parse_family("random:5:6")), Error);
}

TEST(Families, PerturbedProgression) {
  const GroundSet a = generate(parse_family("perturbed-ap:3:50:seed=2"));
  ASSERT_EQ(a.size(), 50u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Rational base(1 + 4 * static_cast<long>(i));
    EXPECT_GE(a[i], base);
    EXPECT_LE(a[i], base + Rational(3));
  }
}

TEST(Families, StringsRoundTrip) {
  for (const char* s : {"interval:64", "geometric:2:32", "random:1000000:128:seed=7", "convex-squares:9",
                        "perturbed-ap:2:10:seed=4"}) {
    EXPECT_EQ(parse_family(s).to_string(), s);
  }
  EXPECT_EQ(parse_family("random:1000:16").family_id(), "random:1000");
  EXPECT_EQ(with_size(parse_family("interval"), 3).to_string(), "interval:3");
}

TEST(Families, ParseErrors) {
  for (const char* s : {"", "intervals:3", "geometric", "random:abc:3", "interval:3:seed=x",
                        "interval:-2"}) {
    EXPECT_THROW(parse_family(s), Error) << s;
  }
  EXPECT_THROW(generate(parse_family("interval")), Error);
  EXPECT_THROW(generate(parse_family("geometric:1:3")), Error);
}

TEST(Rng, Reproducible) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(-5, 5), b.uniform(-5, 5));
  Rng c(42);
  Rng s1 = c.split(1), s2 = c.split(2), s1b = c.split(1);
  EXPECT_EQ(s1.state(), s1b.state());
  EXPECT_NE(s1.state(), s2.state());
  for (int i = 0; i < 1000; ++i) {
    const auto v = s1.uniform(3, 9);
    EXPECT_GE(v, 3);
    EXPECT_LE(v, 9);
  }
}

TEST(Search, ZeroStepsEvaluatesStart) {
  const SearchState st = local_search(Objective::min_aaplus, parse_family("geometric:2:8"), 0, 1);
  EXPECT_EQ(st.current, generate(parse_family("geometric:2:8")));
  EXPECT_TRUE(st.trace.empty());
  EXPECT_EQ(st.value.score, evaluate(Objective::min_aaplus, st.current).score);
}

TEST(Search, NeverWorsens) {
  for (Objective o : {Objective::min_pinned, Objective::min_aaplus, Objective::min_aaminus, Objective::max_energy_ratio}) {
    const FamilySpec start = parse_family(o == Objective::max_energy_ratio ? "interval:16" : "geometric:2:10");
    const SearchState st = local_search(o, start, 60, 9);
    double prev = evaluate(o, generate(start)).display;
    Rational prev_score = evaluate(o, generate(start)).score;
    for (const auto& step : st.trace) {
      if (o == Objective::max_energy_ratio) {
        EXPECT_GE(step.value, prev - 1e-15);
      } else {
        EXPECT_LE(step.value, prev + 1e-15);
      }
      prev = step.value;
    }
    const ObjectiveValue fresh = evaluate(o, st.current);
    EXPECT_EQ(fresh.score, st.value.score);
    EXPECT_LE(st.value.score, prev_score);
    EXPECT_EQ(st.current.size(), generate(start).size());
    EXPECT_FALSE(st.current.contains_zero());
  }
}

TEST(Search, Reproducible) {
  const auto run = [] { return local_search(Objective::max_energy_ratio, parse_family("interval:16"), 80, 5); };
  const SearchState a = run(), b = run();
  EXPECT_EQ(a.current, b.current);
  EXPECT_EQ(a.rng_state, b.rng_state);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].added, b.trace[i].added);
    EXPECT_EQ(a.trace[i].accepted, b.trace[i].accepted);
  }
}

TEST(Objectives, Values) {
  const GroundSet a = set({1, 2, 3});
  EXPECT_EQ(evaluate(Objective::min_pinned, a).score, Rational(9));
  EXPECT_EQ(evaluate(Objective::min_aaplus, a).score, Rational(composite_expander(a, Inner::sum).cardinality));
  // E×/|A+A|^2 = 15/25, negated so that smaller is better.
  EXPECT_EQ(evaluate(Objective::max_energy_ratio, a).score, Rational(-3) / Rational(5));
  EXPECT_NEAR(evaluate(Objective::min_aaminus, a).display,
              composite_expander(a, Inner::difference).cardinality / std::pow(3.0, 1.5), 1e-12);
  EXPECT_EQ(parse_objective("min-aaminus"), Objective::min_aaminus);
  EXPECT_THROW(parse_objective("max-aaplus"), Error);
}
