#pragma once

// Data-parallel building blocks shared by every counting kernel.
//
// Each kernel comes in two flavours selected by Exec: a plain serial loop kept
// as the reference implementation, and an OpenMP version that partitions the
// outer index range over threads and combines the partial results with an
// exact, order-independent reduction (integer sums or merge-by-key of sorted
// runs). Both flavours must produce identical results for every input.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <utility>
#include <vector>

#include <omp.h>

namespace sumprod::kernels {

enum class Exec { serial, parallel };

Exec default_exec() noexcept;
void set_default_exec(Exec exec) noexcept;

/// Number of OpenMP workers used by Exec::parallel (defaults to available parallelism).
int worker_count() noexcept;
void set_worker_count(int workers) noexcept;

template <class Key>
struct Run {
  Key key;
  std::uint64_t count;
};

namespace detail {

/// Rethrows the first exception raised inside a parallel region.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard lock(mu_);
      if (!first_) first_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr first_;
};

template <class Key, class Less>
bool equivalent(const Key& a, const Key& b, const Less& less) {
  return !less(a, b) && !less(b, a);
}

template <class Key, class Less>
void append_rle(std::vector<Key>& keys, const Less& less, std::vector<Run<Key>>& out) {
  std::sort(keys.begin(), keys.end(), less);
  for (auto& k : keys) {
    if (!out.empty() && equivalent(out.back().key, k, less)) {
      ++out.back().count;
    } else {
      out.push_back({std::move(k), 1});
    }
  }
}

template <class Key, class Less>
void compact_weighted(std::vector<Run<Key>>& runs, const Less& less) {
  std::sort(runs.begin(), runs.end(),
            [&](const Run<Key>& a, const Run<Key>& b) { return less(a.key, b.key); });
  std::size_t w = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (w > 0 && equivalent(runs[w - 1].key, runs[r].key, less)) {
      runs[w - 1].count += runs[r].count;
    } else {
      if (w != r) runs[w] = std::move(runs[r]);
      ++w;
    }
  }
  runs.resize(w);
}

template <class Key, class Less>
std::vector<Run<Key>> merge_runs(std::vector<Run<Key>>&& a, std::vector<Run<Key>>&& b,
                                 const Less& less) {
  std::vector<Run<Key>> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (less(a[i].key, b[j].key)) {
      out.push_back(std::move(a[i++]));
    } else if (less(b[j].key, a[i].key)) {
      out.push_back(std::move(b[j++]));
    } else {
      out.push_back({std::move(a[i].key), a[i].count + b[j].count});
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(std::move(a[i]));
  for (; j < b.size(); ++j) out.push_back(std::move(b[j]));
  return out;
}

template <class Key, class Less>
std::vector<Run<Key>> tree_merge(std::vector<std::vector<Run<Key>>>&& parts, const Less& less) {
  if (parts.empty()) return {};
  while (parts.size() > 1) {
    std::vector<std::vector<Run<Key>>> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      next.push_back(merge_runs(std::move(parts[i]), std::move(parts[i + 1]), less));
    }
    if (parts.size() % 2) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

inline std::pair<std::size_t, std::size_t> block(std::size_t n, int t, int nt) {
  const std::size_t lo = n * static_cast<std::size_t>(t) / static_cast<std::size_t>(nt);
  const std::size_t hi = n * static_cast<std::size_t>(t + 1) / static_cast<std::size_t>(nt);
  return {lo, hi};
}

}  // namespace detail

/// Histogram of the keys appended by row_fn(i, std::vector<Key>&) for i in [0, rows).
/// Result is sorted by `less`; equivalent keys are merged with their counts summed.
template <class Key, class RowFn, class Less = std::less<>>
std::vector<Run<Key>> histogram_rows(std::size_t rows, RowFn&& row_fn, Exec exec, Less less = {}) {
  if (exec == Exec::serial || rows < 2 || worker_count() < 2) {
    std::vector<Key> keys;
    for (std::size_t i = 0; i < rows; ++i) row_fn(i, keys);
    std::vector<Run<Key>> out;
    detail::append_rle(keys, less, out);
    return out;
  }
  const int want = static_cast<int>(std::min<std::size_t>(rows, worker_count()));
  std::vector<std::vector<Run<Key>>> parts(static_cast<std::size_t>(want));
  detail::ExceptionSlot slot;
#pragma omp parallel num_threads(want)
  {
    const int t = omp_get_thread_num();
    const int nt = omp_get_num_threads();
    slot.run([&] {
      const auto [lo, hi] = detail::block(rows, t, nt);
      std::vector<Key> keys;
      for (std::size_t i = lo; i < hi; ++i) row_fn(i, keys);
      detail::append_rle(keys, less, parts[static_cast<std::size_t>(t)]);
    });
  }
  slot.rethrow();
  return detail::tree_merge(std::move(parts), less);
}

/// Weighted variant: row_fn(i, std::vector<Run<Key>>&) appends (key, weight) pairs.
template <class Key, class RowFn, class Less = std::less<>>
std::vector<Run<Key>> weighted_histogram_rows(std::size_t rows, RowFn&& row_fn, Exec exec,
                                              Less less = {}) {
  if (exec == Exec::serial || rows < 2 || worker_count() < 2) {
    std::vector<Run<Key>> runs;
    for (std::size_t i = 0; i < rows; ++i) row_fn(i, runs);
    detail::compact_weighted(runs, less);
    return runs;
  }
  const int want = static_cast<int>(std::min<std::size_t>(rows, worker_count()));
  std::vector<std::vector<Run<Key>>> parts(static_cast<std::size_t>(want));
  detail::ExceptionSlot slot;
#pragma omp parallel num_threads(want)
  {
    const int t = omp_get_thread_num();
    const int nt = omp_get_num_threads();
    slot.run([&] {
      const auto [lo, hi] = detail::block(rows, t, nt);
      auto& runs = parts[static_cast<std::size_t>(t)];
      for (std::size_t i = lo; i < hi; ++i) row_fn(i, runs);
      detail::compact_weighted(runs, less);
    });
  }
  slot.rethrow();
  return detail::tree_merge(std::move(parts), less);
}

/// Histogram of gen(i, j) over the rows x cols grid.
template <class Key, class Gen, class Less = std::less<>>
std::vector<Run<Key>> pair_histogram(std::size_t rows, std::size_t cols, Gen&& gen, Exec exec,
                                     Less less = {}) {
  return histogram_rows<Key>(
      rows,
      [&](std::size_t i, std::vector<Key>& out) {
        for (std::size_t j = 0; j < cols; ++j) out.push_back(gen(i, j));
      },
      exec, less);
}

/// Sum of f(i) for i in [0, n); f returns an unsigned count.
template <class F>
std::uint64_t sum_over(std::size_t n, F&& f, Exec exec) {
  std::uint64_t total = 0;
  if (exec == Exec::serial || n < 2 || worker_count() < 2) {
    for (std::size_t i = 0; i < n; ++i) total += f(i);
    return total;
  }
  detail::ExceptionSlot slot;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic) reduction(+ : total)
  for (std::int64_t i = 0; i < count; ++i) {
    std::uint64_t v = 0;
    slot.run([&] { v = f(static_cast<std::size_t>(i)); });
    total += v;
  }
  slot.rethrow();
  return total;
}

/// Calls f(i) for i in [0, n); f must only write to slot i of its outputs.
template <class F>
void for_each_index(std::size_t n, F&& f, Exec exec) {
  if (exec == Exec::serial || n < 2 || worker_count() < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  detail::ExceptionSlot slot;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    slot.run([&] { f(static_cast<std::size_t>(i)); });
  }
  slot.rethrow();
}

}  // namespace sumprod::kernels
