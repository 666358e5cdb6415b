#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sumprod/rational.hpp"

namespace sumprod {

/// Finite, non-empty, strictly increasing set of rationals.
///
/// Immutable after construction; copies share storage, so a GroundSet can be
/// handed to concurrent workers freely.
class GroundSet {
 public:
  /// Sorts and deduplicates. Throws EmptySet for an empty input.
  explicit GroundSet(std::vector<Rational> values);

  std::size_t size() const noexcept { return elems_->size(); }
  const Rational& operator[](std::size_t i) const { return (*elems_)[i]; }
  std::span<const Rational> elements() const noexcept { return *elems_; }
  auto begin() const noexcept { return elems_->cbegin(); }
  auto end() const noexcept { return elems_->cend(); }

  const Rational& min() const { return elems_->front(); }
  const Rational& max() const { return elems_->back(); }

  bool contains(const Rational& x) const;
  bool contains_zero() const;
  bool all_positive() const { return min().sign() > 0; }

  std::string to_string() const;

  friend bool operator==(const GroundSet& a, const GroundSet& b) {
    return a.elems_ == b.elems_ || *a.elems_ == *b.elems_;
  }

 private:
  std::shared_ptr<const std::vector<Rational>> elems_;
};

struct MakeSetResult {
  GroundSet set;
  std::size_t duplicates_removed = 0;
};

/// Builds a GroundSet and reports how many inputs collapsed onto an earlier one.
MakeSetResult make_set(std::vector<Rational> values);

/// Sorted, deduplicated subset that may be empty (e.g. A ∩ x⁻¹A).
using Subset = std::vector<Rational>;

/// Set file: one integer or "p/q" per line, '#' comments, blank lines skipped,
/// duplicates allowed. Throws ParseError with the offending line number.
MakeSetResult parse_set(std::istream& in);
MakeSetResult read_set_file(const std::filesystem::path& path);
void write_set(std::ostream& out, const GroundSet& set);

}  // namespace sumprod
