#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "sumprod/energy.hpp"
#include "sumprod/geometry.hpp"
#include "sumprod/kernels/lattice.hpp"
#include "sumprod/kernels/parallel.hpp"
#include "sumprod/refine.hpp"
#include "sumprod/setcore.hpp"

using namespace sumprod;
using kernels::Exec;

namespace {

struct Snapshot {
  GroundSet sum, diff, prod, ratio;
  mpz_class add, mult, e3, shifted_plus, shifted_minus, gk;
  std::uint64_t collinear = 0, pinned = 0, aplus = 0;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

Snapshot snapshot(const GroundSet& a, const GroundSet& b, Exec ex) {
  return Snapshot{sumset(a, b, ex),
                  difference_set(a, b, ex),
                  product_set(a, b, ex),
                  ratio_set(a, b, ex),
                  additive_energy(a, b, ex),
                  multiplicative_energy(a, b, ex),
                  energy_moment(a, 3, ex).value,
                  shifted_energy_sum(a, b, a, Sign::plus, ShiftCount::all, ex),
                  shifted_energy_sum(a, b, a, Sign::minus, ShiftCount::all, ex),
                  gk_distance_quadruples(a, ex),
                  grid_collinear_triples(a, ex),
                  best_pinned_product(a, Sign::plus, ex).cardinality,
                  composite_expander(a, Inner::sum, ex).cardinality};
}

class WideGuard {
 public:
  WideGuard() { lattice::set_force_wide(true); }
  ~WideGuard() { lattice::set_force_wide(false); }
};

}  // namespace

TEST(Kernels, HistogramMergeIsOrderIndependent) {
  std::vector<long> keys(5000);
  std::mt19937_64 rng(1);
  for (auto& k : keys) k = static_cast<long>(rng() % 97);
  const auto row = [&](std::size_t i, std::vector<long>& out) { out.push_back(keys[i]); };
  const auto serial = kernels::histogram_rows<long>(keys.size(), row, Exec::serial);
  for (int w : {2, 3, 4, 7}) {
    kernels::set_worker_count(w);
    const auto par = kernels::histogram_rows<long>(keys.size(), row, Exec::parallel);
    ASSERT_EQ(par.size(), serial.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      EXPECT_EQ(par[i].key, serial[i].key);
      EXPECT_EQ(par[i].count, serial[i].count);
    }
  }
  kernels::set_worker_count(4);
}

TEST(Kernels, ExceptionsPropagateFromWorkers) {
  const auto boom = [](std::size_t i) -> std::uint64_t {
    if (i == 37) throw std::runtime_error("row 37");
    return 1;
  };
  EXPECT_THROW(kernels::sum_over(100, boom, Exec::parallel), std::runtime_error);
  EXPECT_EQ(kernels::sum_over(100, [](std::size_t i) -> std::uint64_t { return i; }, Exec::parallel), 4950u);
}

TEST(Kernels, SerialParallelAndWidePathsAgree) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    const GroundSet a = testutil::random_rationals(rng, 3 + trial % 14, 50, 6, trial % 3 == 0);
    const GroundSet b = testutil::random_rationals(rng, 2 + trial % 9, 50, 6, false);
    const Snapshot serial = snapshot(a, b, Exec::serial);
    EXPECT_TRUE(serial == snapshot(a, b, Exec::parallel)) << a.to_string();
    WideGuard wide;
    EXPECT_TRUE(serial == snapshot(a, b, Exec::parallel)) << a.to_string();
    EXPECT_TRUE(serial == snapshot(a, b, Exec::serial)) << a.to_string();
  }
}

TEST(Kernels, LargeMagnitudesTakeWidePath) {
  // Scaled numerators beyond 2^30 force mpz arithmetic without any hook.
  const GroundSet a = testutil::set({"12345678901/7", "-98765432109/11", "3", "1/13", "5000000000"});
  const Snapshot serial = snapshot(a, a, Exec::serial);
  EXPECT_TRUE(serial == snapshot(a, a, Exec::parallel));
  EXPECT_EQ(serial.sum.size(), 15u);
}

TEST(Kernels, CertificatesAgreeAcrossPaths) {
  const GroundSet a = testutil::set({1, 2, 3, 4, 6, 8, 9, 12, 16, 18});
  for (auto* f : {&popular_ratio_class, &refine_energy_subset, &double_pigeonhole}) {
    const RefinementCertificate s = f(a, Exec::serial);
    const RefinementCertificate p = f(a, Exec::parallel);
    EXPECT_EQ(s.p, p.p);
    EXPECT_EQ(s.delta, p.delta);
    EXPECT_EQ(s.a_prime, p.a_prime);
    EXPECT_EQ(s.t, p.t);
  }
}
