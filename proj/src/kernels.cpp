#include <atomic>

#include "sumprod/kernels/lattice.hpp"
#include "sumprod/kernels/parallel.hpp"

namespace sumprod::kernels {
namespace {

std::atomic<Exec> g_exec{Exec::parallel};
std::atomic<int> g_workers{0};

}  // namespace

Exec default_exec() noexcept { return g_exec.load(std::memory_order_relaxed); }
void set_default_exec(Exec exec) noexcept { g_exec.store(exec, std::memory_order_relaxed); }

int worker_count() noexcept {
  const int w = g_workers.load(std::memory_order_relaxed);
  return w > 0 ? w : omp_get_max_threads();
}

void set_worker_count(int workers) noexcept {
  g_workers.store(workers > 0 ? workers : 0, std::memory_order_relaxed);
}

}  // namespace sumprod::kernels

namespace sumprod::lattice {
namespace {

std::atomic<bool> g_force_wide{false};

}  // namespace

void set_force_wide(bool on) noexcept { g_force_wide.store(on, std::memory_order_relaxed); }
bool force_wide() noexcept { return g_force_wide.load(std::memory_order_relaxed); }

namespace detail {

Prepared prepare(std::initializer_list<std::span<const Rational>> sets) {
  Prepared p;
  p.den = 1;
  for (const auto& s : sets) {
    for (const auto& x : s) mpz_lcm(p.den.get_mpz_t(), p.den.get_mpz_t(), x.den().get_mpz_t());
  }
  const mpz_class limit(static_cast<long>(kSmallLimit));
  p.nums.reserve(sets.size());
  for (const auto& s : sets) {
    auto& out = p.nums.emplace_back();
    out.reserve(s.size());
    for (const auto& x : s) {
      mpz_class v = x.num() * (p.den / x.den());
      if (abs(v) >= limit) p.small = false;
      out.push_back(std::move(v));
    }
  }
  return p;
}

Scaled<std::int64_t> narrow(const Prepared& p) {
  Scaled<std::int64_t> s;
  s.den = p.den;
  s.sets.reserve(p.nums.size());
  for (const auto& v : p.nums) {
    auto& out = s.sets.emplace_back();
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.get_si());
  }
  return s;
}

Scaled<mpz_class> widen(Prepared&& p) { return {std::move(p.nums), std::move(p.den)}; }

}  // namespace detail
}  // namespace sumprod::lattice
